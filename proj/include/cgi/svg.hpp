#pragma once

#include <string>
#include <vector>

#include "cgi/imaging.hpp"
#include "cgi/metrics.hpp"

namespace cgi::svg {

struct HeatmapAxes {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<int> x_ticks; ///< one per column
    std::vector<int> y_ticks; ///< one per row
};

/// Self-contained SVG heatmap, row 0 at the bottom. Non-finite cells are drawn grey.
std::string heatmap(const RealGrid& values, const HeatmapAxes& axes);

/// Column of `grid` selected by one of the sweep CSV column names
/// ("p_int", "p_d0_err", "f", "snr_int_ratio", "visibility").
double metric_value(const MetricPoint& p, const std::string& column);

/// Heatmap of one sweep metric with M on the vertical axis and N horizontal.
std::string sweep_heatmap(const std::vector<MetricPoint>& grid, const std::string& column);

} // namespace cgi::svg
