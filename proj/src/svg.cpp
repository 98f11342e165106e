#include "cgi/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace cgi::svg {

namespace {

// Viridis anchors, sampled every 1/8.
constexpr std::array<std::array<double, 3>, 9> kViridis{{
    {68, 1, 84}, {71, 44, 122}, {59, 81, 139}, {44, 113, 142}, {33, 144, 141},
    {39, 173, 129}, {92, 200, 99}, {170, 220, 50}, {253, 231, 37},
}};

std::string color(double u) {
    u = std::clamp(u, 0.0, 1.0) * (kViridis.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), kViridis.size() - 2);
    const double f = u - static_cast<double>(i);
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(std::lround(kViridis[i][c] * (1 - f) + kViridis[i + 1][c] * f));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

std::string heatmap(const RealGrid& values, const HeatmapAxes& axes) {
    const int rows = static_cast<int>(values.rows());
    const int cols = static_cast<int>(values.cols());
    const double cell_w = std::max(4.0, 560.0 / std::max(cols, 1));
    const double cell_h = std::max(4.0, 400.0 / std::max(rows, 1));
    const double left = 70, top = 40, bar_gap = 20, bar_w = 18;
    const double plot_w = cell_w * cols, plot_h = cell_h * rows;
    const double width = left + plot_w + bar_gap + bar_w + 70;
    const double height = top + plot_h + 60;

    double lo = INFINITY, hi = -INFINITY;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (std::isfinite(values(i))) {
            lo = std::min(lo, values(i));
            hi = std::max(hi, values(i));
        }
    }
    if (!(lo <= hi))
        lo = hi = 0;
    const double span = hi > lo ? hi - lo : 1.0;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(axes.title) << "</text>\n";

    for (int r = 0; r < rows; ++r) {
        const double y = top + plot_h - (r + 1) * cell_h;
        for (int c = 0; c < cols; ++c) {
            const double v = values(r, c);
            const std::string fill = std::isfinite(v) ? color((v - lo) / span) : "#bbbbbb";
            s << "<rect x=\"" << num(left + c * cell_w) << "\" y=\"" << num(y) << "\" width=\"" << num(cell_w)
              << "\" height=\"" << num(cell_h) << "\" fill=\"" << fill << "\"><title>" << num(v)
              << "</title></rect>\n";
        }
    }

    // sparse tick labels
    const int x_every = std::max(1, cols / 10);
    for (int c = 0; c < cols && c < static_cast<int>(axes.x_ticks.size()); c += x_every)
        s << "<text x=\"" << num(left + (c + 0.5) * cell_w) << "\" y=\"" << num(top + plot_h + 14)
          << "\" text-anchor=\"middle\">" << axes.x_ticks[c] << "</text>\n";
    const int y_every = std::max(1, rows / 10);
    for (int r = 0; r < rows && r < static_cast<int>(axes.y_ticks.size()); r += y_every)
        s << "<text x=\"" << num(left - 6) << "\" y=\"" << num(top + plot_h - (r + 0.5) * cell_h + 4)
          << "\" text-anchor=\"end\">" << axes.y_ticks[r] << "</text>\n";
    s << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(top + plot_h + 36)
      << "\" text-anchor=\"middle\">" << escape(axes.x_label) << "</text>\n";
    s << "<text x=\"20\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << num(top + plot_h / 2) << ")\">" << escape(axes.y_label) << "</text>\n";

    const double bx = left + plot_w + bar_gap;
    const int steps = 32;
    for (int k = 0; k < steps; ++k) {
        const double y = top + plot_h - (k + 1) * plot_h / steps;
        s << "<rect x=\"" << num(bx) << "\" y=\"" << num(y) << "\" width=\"" << num(bar_w) << "\" height=\""
          << num(plot_h / steps + 0.5) << "\" fill=\"" << color((k + 0.5) / steps) << "\"/>\n";
    }
    s << "<text x=\"" << num(bx + bar_w + 4) << "\" y=\"" << num(top + plot_h) << "\">" << num(lo) << "</text>\n";
    s << "<text x=\"" << num(bx + bar_w + 4) << "\" y=\"" << num(top + 10) << "\">" << num(hi) << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

double metric_value(const MetricPoint& p, const std::string& column) {
    if (column == "p_int") return p.p_int;
    if (column == "p_d0_err") return p.p_d0_err;
    if (column == "f") return p.snr_cgi_factor;
    if (column == "snr_int_ratio") return p.snr_int_ratio;
    if (column == "visibility") return p.visibility;
    throw InvalidParameter("unknown metric column '" + column + "'");
}

std::string sweep_heatmap(const std::vector<MetricPoint>& grid, const std::string& column) {
    std::map<int, int> m_index, n_index;
    for (const auto& p : grid) {
        m_index.emplace(p.m, 0);
        n_index.emplace(p.n, 0);
    }
    HeatmapAxes axes{column, "N (inner cycles)", "M (outer cycles)", {}, {}};
    int i = 0;
    for (auto& [m, idx] : m_index) {
        idx = i++;
        axes.y_ticks.push_back(m);
    }
    i = 0;
    for (auto& [n, idx] : n_index) {
        idx = i++;
        axes.x_ticks.push_back(n);
    }
    RealGrid values = RealGrid::Constant(static_cast<Eigen::Index>(m_index.size()),
                                         static_cast<Eigen::Index>(n_index.size()), NAN);
    for (const auto& p : grid)
        values(m_index[p.m], n_index[p.n]) = metric_value(p, column);
    return heatmap(values, axes);
}

} // namespace cgi::svg
