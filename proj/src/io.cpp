#include "cgi/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cgi::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in)
        throw IoError("cannot open " + path.string());
    return in;
}

// Next whitespace-delimited PGM header token, skipping comments.
std::string next_token(std::istream& in) {
    std::string tok;
    char c;
    while (in.get(c)) {
        if (c == '#') {
            std::string discard;
            std::getline(in, discard);
            if (!tok.empty())
                return tok;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty())
                return tok;
            continue;
        }
        tok.push_back(c);
    }
    if (tok.empty())
        throw IoError("unexpected end of PGM data");
    return tok;
}

int parse_int(const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("expected integer, got '" + s + "'");
    return v;
}

std::int64_t parse_int64(const std::string& s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("expected integer, got '" + s + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    for (auto& c : cells) {
        while (!c.empty() && (c.back() == '\r' || c.back() == ' '))
            c.pop_back();
        while (!c.empty() && c.front() == ' ')
            c.erase(c.begin());
    }
    return cells;
}

/// Non-empty lines of a CSV stream.
std::vector<std::vector<std::string>> read_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

void expect_header(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& header) {
    if (rows.empty() || rows.front() != header) {
        std::string want;
        for (const auto& h : header)
            want += (want.empty() ? "" : ",") + h;
        throw IoError("expected CSV header '" + want + "'");
    }
}

/// Parses x,y,value... tables into grids sized by the largest coordinate.
template <typename T, typename Parse>
std::vector<Grid<T>> read_xy_table(std::istream& in, const std::vector<std::string>& header, Parse parse) {
    const auto rows = read_rows(in);
    expect_header(rows, header);
    const std::size_t cols = header.size() - 2;
    int w = 0, h = 0;
    std::vector<std::tuple<int, int, std::vector<T>>> entries;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw IoError("CSV row " + std::to_string(r) + " has " + std::to_string(row.size()) + " fields");
        const int x = parse_int(row[0]);
        const int y = parse_int(row[1]);
        if (x < 0 || y < 0)
            throw IoError("negative pixel coordinate");
        std::vector<T> vals;
        for (std::size_t c = 0; c < cols; ++c)
            vals.push_back(parse(row[c + 2]));
        w = std::max(w, x + 1);
        h = std::max(h, y + 1);
        entries.emplace_back(x, y, std::move(vals));
    }
    if (entries.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h))
        throw IoError("CSV table does not cover a full rectangle of pixels");
    std::vector<Grid<T>> grids(cols, Grid<T>::Zero(h, w));
    for (const auto& [x, y, vals] : entries)
        for (std::size_t c = 0; c < cols; ++c)
            grids[c](y, x) = vals[c];
    return grids;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
    if (s == "inf" || s == "+inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("expected number, got '" + s + "'");
    return v;
}

PgmImage read_pgm(std::istream& in) {
    const std::string magic = next_token(in);
    if (magic != "P2" && magic != "P5")
        throw IoError("not a PGM file (magic '" + magic + "')");
    const int w = parse_int(next_token(in));
    const int h = parse_int(next_token(in));
    const int maxval = parse_int(next_token(in));
    if (w < 1 || h < 1)
        throw IoError("PGM dimensions must be positive");
    if (maxval < 1 || maxval > 65535)
        throw IoError("PGM maxval out of range");

    PgmImage img{Grid<int>(h, w), maxval};
    if (magic == "P2") {
        for (Eigen::Index i = 0; i < img.pixels.size(); ++i)
            img.pixels(i) = parse_int(next_token(in));
    } else {
        // next_token consumed the single whitespace byte after maxval
        const int bytes = maxval < 256 ? 1 : 2;
        std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            throw IoError("truncated P5 raster");
        for (Eigen::Index i = 0; i < img.pixels.size(); ++i)
            img.pixels(i) = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
    }
    if ((img.pixels < 0).any() || (img.pixels > maxval).any())
        throw IoError("PGM sample exceeds maxval");
    return img;
}

PgmImage read_pgm(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::in | std::ios::binary);
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const PgmImage& image, bool binary) {
    const auto& px = image.pixels;
    out << (binary ? "P5" : "P2") << '\n' << px.cols() << ' ' << px.rows() << '\n' << image.maxval << '\n';
    if (binary) {
        for (Eigen::Index i = 0; i < px.size(); ++i) {
            if (image.maxval > 255)
                out.put(static_cast<char>(px(i) >> 8));
            out.put(static_cast<char>(px(i) & 0xff));
        }
        return;
    }
    for (Eigen::Index y = 0; y < px.rows(); ++y) {
        for (Eigen::Index x = 0; x < px.cols(); ++x)
            out << (x ? " " : "") << px(y, x);
        out << '\n';
    }
}

void write_pgm(const std::filesystem::path& path, const PgmImage& image, bool binary) {
    std::ostringstream ss;
    write_pgm(ss, image, binary);
    write_file(path, ss.str());
}

RealGrid read_phase_csv(std::istream& in) {
    const auto rows = read_rows(in);
    if (rows.empty())
        throw IoError("phase CSV is empty");
    const std::size_t w = rows.front().size();
    RealGrid phase(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(w));
    for (std::size_t y = 0; y < rows.size(); ++y) {
        if (rows[y].size() != w)
            throw IoError("phase CSV rows have unequal length");
        for (std::size_t x = 0; x < w; ++x)
            phase(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = parse_double(rows[y][x]);
    }
    return phase;
}

RealGrid read_phase_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_phase_csv(in);
}

void write_phase_csv(std::ostream& out, const RealGrid& phase) {
    for (Eigen::Index y = 0; y < phase.rows(); ++y) {
        for (Eigen::Index x = 0; x < phase.cols(); ++x)
            out << (x ? "," : "") << format_double(phase(y, x));
        out << '\n';
    }
}

Mask load_mask(const std::filesystem::path& pgm, const std::optional<std::filesystem::path>& phase_csv) {
    const PgmImage img = read_pgm(pgm);
    const RealGrid magnitude = img.pixels.cast<double>() / static_cast<double>(img.maxval);
    RealGrid phase = RealGrid::Zero(magnitude.rows(), magnitude.cols());
    if (phase_csv) {
        phase = read_phase_csv(*phase_csv);
        if (phase.rows() != magnitude.rows() || phase.cols() != magnitude.cols())
            throw InvalidParameter("phase CSV is " + std::to_string(phase.cols()) + "x" +
                                   std::to_string(phase.rows()) + " but mask is " +
                                   std::to_string(magnitude.cols()) + "x" + std::to_string(magnitude.rows()));
    }
    return Mask::from_polar(magnitude, phase);
}

PgmImage threshold_to_pgm(const BoolGrid& blocked) {
    return {blocked.select(Grid<int>::Zero(blocked.rows(), blocked.cols()),
                           Grid<int>::Constant(blocked.rows(), blocked.cols(), 255)),
            255};
}

void write_counts_csv(std::ostream& out, const CoincidenceCounts& counts) {
    out << "x,y,c_d0,c_d1,c_dl\n";
    for (int y = 0; y < counts.height(); ++y)
        for (int x = 0; x < counts.width(); ++x)
            out << x << ',' << y << ',' << counts.c_d0(y, x) << ',' << counts.c_d1(y, x) << ','
                << counts.c_dl(y, x) << '\n';
}

CountTables read_counts_csv(std::istream& in) {
    auto grids = read_xy_table<std::int64_t>(in, {"x", "y", "c_d0", "c_d1", "c_dl"}, parse_int64);
    for (const auto& g : grids)
        if ((g < 0).any())
            throw IoError("negative coincidence count");
    return {std::move(grids[0]), std::move(grids[1]), std::move(grids[2])};
}

void write_estimate_csv(std::ostream& out, const ImageEstimate& est) {
    out << "x,y,d\n";
    for (Eigen::Index y = 0; y < est.d.rows(); ++y)
        for (Eigen::Index x = 0; x < est.d.cols(); ++x)
            out << x << ',' << y << ',' << format_double(est.d(y, x)) << '\n';
}

RealGrid read_estimate_csv(std::istream& in) {
    return std::move(read_xy_table<double>(in, {"x", "y", "d"}, parse_double)[0]);
}

void write_dose_csv(std::ostream& out, const RealGrid& dose) {
    out << "x,y,dose\n";
    for (Eigen::Index y = 0; y < dose.rows(); ++y)
        for (Eigen::Index x = 0; x < dose.cols(); ++x)
            out << x << ',' << y << ',' << format_double(dose(y, x)) << '\n';
}

RealGrid read_dose_csv(std::istream& in) {
    return std::move(read_xy_table<double>(in, {"x", "y", "dose"}, parse_double)[0]);
}

void write_sweep_csv(std::ostream& out, const std::vector<MetricPoint>& grid) {
    for (std::size_t i = 0; i < kSweepColumns.size(); ++i)
        out << (i ? "," : "") << kSweepColumns[i];
    out << '\n';
    for (const auto& p : grid)
        out << p.m << ',' << p.n << ',' << format_double(p.p_int) << ',' << format_double(p.p_d0_err) << ','
            << format_double(p.snr_cgi_factor) << ',' << format_double(p.snr_int_ratio) << ','
            << format_double(p.visibility) << '\n';
}

std::vector<MetricPoint> read_sweep_csv(std::istream& in) {
    const auto rows = read_rows(in);
    expect_header(rows, kSweepColumns);
    std::vector<MetricPoint> grid;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != kSweepColumns.size())
            throw IoError("sweep CSV row " + std::to_string(r) + " has wrong field count");
        MetricPoint p;
        p.m = parse_int(row[0]);
        p.n = parse_int(row[1]);
        p.p_int = parse_double(row[2]);
        p.p_d0_err = parse_double(row[3]);
        p.snr_cgi_factor = parse_double(row[4]);
        p.snr_int_ratio = parse_double(row[5]);
        p.visibility = parse_double(row[6]);
        grid.push_back(p);
    }
    return grid;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::out | std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << contents;
    if (!out)
        throw IoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::in | std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace cgi::io
