#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cgi/imaging.hpp"
#include "cgi/metrics.hpp"

namespace cgi::io {

struct PgmImage {
    Grid<int> pixels; ///< rows = y
    int maxval{255};
};

/// Reads P2 (ASCII) or P5 (binary) graymaps, including '#' comments.
PgmImage read_pgm(std::istream& in);
PgmImage read_pgm(const std::filesystem::path& path);

void write_pgm(std::ostream& out, const PgmImage& image, bool binary = true);
void write_pgm(const std::filesystem::path& path, const PgmImage& image, bool binary = true);

/// Grid of reals, one CSV row per image row, no header.
RealGrid read_phase_csv(std::istream& in);
RealGrid read_phase_csv(const std::filesystem::path& path);
void write_phase_csv(std::ostream& out, const RealGrid& phase);

/// |t| = v / maxval from the graymap, phase from the optional CSV.
Mask load_mask(const std::filesystem::path& pgm, const std::optional<std::filesystem::path>& phase_csv = {});

/// Binary map (true = blocked) to graymap: blocked 0, open 255.
PgmImage threshold_to_pgm(const BoolGrid& blocked);

struct CountTables {
    CountGrid c_d0, c_d1, c_dl;
};

void write_counts_csv(std::ostream& out, const CoincidenceCounts& counts);
CountTables read_counts_csv(std::istream& in);

void write_estimate_csv(std::ostream& out, const ImageEstimate& est);
RealGrid read_estimate_csv(std::istream& in);

void write_dose_csv(std::ostream& out, const RealGrid& dose);
RealGrid read_dose_csv(std::istream& in);

inline const std::vector<std::string> kSweepColumns{"M", "N", "p_int", "p_d0_err", "f", "snr_int_ratio",
                                                    "visibility"};

void write_sweep_csv(std::ostream& out, const std::vector<MetricPoint>& grid);
std::vector<MetricPoint> read_sweep_csv(std::istream& in);

/// Shortest round-trip decimal form; "inf"/"nan" for non-finite values.
std::string format_double(double v);
double parse_double(const std::string& s);

/// Writes `contents` to `path`, raising IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

} // namespace cgi::io
