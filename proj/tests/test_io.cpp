#include "cgi/io.hpp"
#include "cgi/svg.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

using namespace cgi;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("cgi_io_" + std::to_string(std::random_device{}()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

io::PgmImage random_image(int w, int h, int maxval, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> v(0, maxval);
    io::PgmImage img{Grid<int>(h, w), maxval};
    for (Eigen::Index i = 0; i < img.pixels.size(); ++i)
        img.pixels(i) = v(rng);
    return img;
}

} // namespace

TEST(Pgm, AsciiWithComments) {
    std::istringstream in("P2\n# a comment\n3 2 # trailing\n255\n0 128 255\n# mid\n10 20 30\n");
    const auto img = io::read_pgm(in);
    ASSERT_EQ(img.pixels.cols(), 3);
    ASSERT_EQ(img.pixels.rows(), 2);
    EXPECT_EQ(img.maxval, 255);
    EXPECT_EQ(img.pixels(0, 1), 128);
    EXPECT_EQ(img.pixels(1, 2), 30);
}

TEST(Pgm, RoundTripBothEncodingsAndDepths) {
    for (int maxval : {1, 255, 1000, 65535})
        for (bool binary : {true, false}) {
            const auto img = random_image(7, 5, maxval, static_cast<unsigned>(maxval) + binary);
            std::stringstream buf;
            io::write_pgm(buf, img, binary);
            const auto back = io::read_pgm(buf);
            EXPECT_EQ(back.maxval, maxval);
            EXPECT_TRUE((back.pixels == img.pixels).all()) << maxval << ' ' << binary;
        }
}

TEST(Pgm, RejectsMalformedInput) {
    auto bad = [](const std::string& text) {
        std::istringstream in(text);
        EXPECT_THROW(io::read_pgm(in), IoError) << text;
    };
    bad("P3\n1 1\n255\n0 0 0\n");
    bad("P2\n0 1\n255\n");
    bad("P2\n2 1\n255\n7\n");
    bad("P2\n1 1\n255\n300\n");
    bad("P2\n1 1\n70000\n0\n");
    bad("P2\n1 1\n255\nx\n");
    bad(std::string("P5\n2 2\n255\n") + "ab");
}

TEST(Pgm, MissingFileIsIoError) {
    EXPECT_THROW(io::read_pgm(fs::path("/nonexistent/mask.pgm")), IoError);
}

TEST(Mask, LoadFromGraymapAndPhase) {
    TempDir dir;
    io::PgmImage img{Grid<int>(2, 3), 200};
    img.pixels << 0, 100, 200, 200, 50, 0;
    io::write_pgm(dir.path() / "m.pgm", img);
    RealGrid phase(2, 3);
    phase << 0, 0.5, 1, 1.5, 2, 2.5;
    std::ostringstream csv;
    io::write_phase_csv(csv, phase);
    io::write_file(dir.path() / "p.csv", csv.str());

    const Mask mask = io::load_mask(dir.path() / "m.pgm", dir.path() / "p.csv");
    EXPECT_EQ(mask.width(), 3);
    EXPECT_NEAR(std::abs(mask.t(0, 1)), 0.5, 1e-15);
    EXPECT_NEAR(std::arg(mask.t(0, 1)), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(mask.t(1, 1)), 0.25, 1e-15);
    EXPECT_EQ(std::abs(mask.t(0, 0)), 0.0);

    const Mask plain = io::load_mask(dir.path() / "m.pgm");
    EXPECT_EQ(plain.t(1, 0), std::complex<double>(1.0, 0.0));
}

TEST(Mask, PhaseDimensionMismatchIsRejected) {
    TempDir dir;
    io::write_pgm(dir.path() / "m.pgm", io::PgmImage{Grid<int>::Zero(4, 4), 255});
    io::write_file(dir.path() / "p.csv", "0,0,0\n0,0,0\n0,0,0\n");
    EXPECT_THROW(io::load_mask(dir.path() / "m.pgm", dir.path() / "p.csv"), InvalidParameter);
    io::write_file(dir.path() / "ragged.csv", "0,0,0,0\n0,0\n");
    EXPECT_THROW(io::load_mask(dir.path() / "m.pgm", dir.path() / "ragged.csv"), IoError);
}

TEST(Threshold, BlockedIsBlack) {
    BoolGrid b(1, 3);
    b << true, false, true;
    const auto img = io::threshold_to_pgm(b);
    EXPECT_EQ(img.pixels(0, 0), 0);
    EXPECT_EQ(img.pixels(0, 1), 255);
    EXPECT_EQ(img.maxval, 255);
}

TEST(CountsCsv, RoundTrip) {
    CoincidenceCounts counts;
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::int64_t> v(0, 1'000'000'000'000);
    counts.c_d0 = counts.c_d1 = counts.c_dl = CountGrid(3, 5);
    for (auto* g : {&counts.c_d0, &counts.c_d1, &counts.c_dl})
        for (Eigen::Index i = 0; i < g->size(); ++i)
            (*g)(i) = v(rng);
    std::stringstream buf;
    io::write_counts_csv(buf, counts);
    EXPECT_EQ(buf.str().substr(0, 18), "x,y,c_d0,c_d1,c_dl");
    const auto back = io::read_counts_csv(buf);
    EXPECT_TRUE((back.c_d0 == counts.c_d0).all());
    EXPECT_TRUE((back.c_d1 == counts.c_d1).all());
    EXPECT_TRUE((back.c_dl == counts.c_dl).all());
}

TEST(CountsCsv, RejectsBadTables) {
    auto bad = [](const std::string& text) {
        std::istringstream in(text);
        EXPECT_THROW(io::read_counts_csv(in), IoError) << text;
    };
    bad("x,y,d0,d1,dl\n0,0,1,2,3\n");
    bad("x,y,c_d0,c_d1,c_dl\n0,0,1,2\n");
    bad("x,y,c_d0,c_d1,c_dl\n0,0,1,2,-3\n");
    bad("x,y,c_d0,c_d1,c_dl\n1,1,1,2,3\n");
    bad("x,y,c_d0,c_d1,c_dl\n0,0,1.5,2,3\n");
}

TEST(EstimateAndDoseCsv, RoundTripExactly) {
    std::mt19937 rng(8);
    std::normal_distribution<double> v(0, 1);
    ImageEstimate est;
    est.d = RealGrid(4, 6);
    for (Eigen::Index i = 0; i < est.d.size(); ++i)
        est.d(i) = v(rng) * 1e-3;
    std::stringstream a;
    io::write_estimate_csv(a, est);
    EXPECT_TRUE((io::read_estimate_csv(a) == est.d).all());

    const RealGrid dose = est.d.abs() * 1e5;
    std::stringstream b;
    io::write_dose_csv(b, dose);
    EXPECT_TRUE((io::read_dose_csv(b) == dose).all());
}

TEST(SweepCsv, RoundTripIncludingInfinity) {
    auto grid = sweep_metrics({2, 4, 1}, {1, 13, 4}, ComponentLossesd::fig6(), false);
    grid.front().snr_int_ratio = std::numeric_limits<double>::infinity();
    std::stringstream buf;
    io::write_sweep_csv(buf, grid);
    EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')), "M,N,p_int,p_d0_err,f,snr_int_ratio,visibility");
    const auto back = io::read_sweep_csv(buf);
    ASSERT_EQ(back.size(), grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(back[i].m, grid[i].m);
        EXPECT_EQ(back[i].n, grid[i].n);
        EXPECT_EQ(back[i].p_int, grid[i].p_int);
        EXPECT_EQ(back[i].snr_cgi_factor, grid[i].snr_cgi_factor);
        EXPECT_EQ(back[i].snr_int_ratio, grid[i].snr_int_ratio);
        EXPECT_EQ(back[i].visibility, grid[i].visibility);
    }
}

TEST(FormatDouble, ShortestRoundTrip) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> v(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double x = v(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        EXPECT_EQ(io::parse_double(io::format_double(x)), x);
    }
    EXPECT_EQ(io::format_double(0.25), "0.25");
    EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_TRUE(std::isnan(io::parse_double("nan")));
    EXPECT_THROW(io::parse_double("1.0x"), IoError);
    EXPECT_THROW(io::parse_double(""), IoError);
}

TEST(Files, WriteIntoMissingDirectoryFails) {
    EXPECT_THROW(io::write_file("/nonexistent/dir/out.txt", "x"), IoError);
    EXPECT_THROW(io::read_file("/nonexistent/dir/out.txt"), IoError);
}

TEST(Svg, HeatmapIsSelfContained) {
    RealGrid v(2, 3);
    v << 0, 1, 2, 3, std::nan(""), 5;
    const std::string doc = svg::heatmap(v, {"title", "N", "M", {1, 2, 3}, {2, 3}});
    EXPECT_EQ(doc.rfind("<svg", 0) == 0 || doc.rfind("<?xml", 0) == 0, true);
    EXPECT_NE(doc.find("</svg>"), std::string::npos);
    EXPECT_NE(doc.find("title"), std::string::npos);
    EXPECT_EQ(doc.find("href=\"http"), std::string::npos);
}

TEST(Svg, SweepHeatmapColumns) {
    const auto grid = sweep_metrics({2, 3, 1}, {5, 7, 1}, ComponentLossesd::ideal(), false);
    for (const char* col : {"p_int", "p_d0_err", "f", "snr_int_ratio", "visibility"})
        EXPECT_NE(svg::sweep_heatmap(grid, col).find("</svg>"), std::string::npos);
    EXPECT_EQ(svg::metric_value(grid[0], "visibility"), grid[0].visibility);
    EXPECT_THROW(svg::metric_value(grid[0], "nope"), InvalidParameter);
}
