// cgi: command-line front end for the counterfactual ghost imaging simulator.
//
//   cgi probs --m 2 --n 13 --blocked
//   cgi sweep --m-range 2:10 --n-range 2:50 --losses fig6 --out sweep.csv --svg-dir plots
//   cgi image --mask mask.pgm --m 4 --n 16 --n-bar 1000 --seed 7 --out-dir run1
//
// Exit codes: 0 success, 1 internal error, 2 usage error, 3 I/O error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cgi/imaging.hpp"
#include "cgi/io.hpp"
#include "cgi/metrics.hpp"
#include "cgi/run_config.hpp"
#include "cgi/svg.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr const char* kOutputDirEnv = "CGI_OUTPUT_DIR";

fs::path output_dir(const cgi::RunConfig& cfg) {
    if (!cfg.out_dir.empty())
        return cfg.out_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env)
        return env;
    return ".";
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw cgi::IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string sig9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%#.9g", v);
    return buf;
}

int cmd_probs(const cgi::RunConfig& cfg) {
    const auto dist = cgi::run_protocol(cfg.protocol_params(), cfg.transmittance());
    for (cgi::Fate f : cgi::kAllFates)
        std::cout << "p_" << cgi::fate_name(f) << ' ' << sig9(dist[f]) << '\n';
    return kExitOk;
}

int cmd_sweep(const cgi::RunConfig& cfg) {
    const auto grid = cgi::sweep_metrics(cgi::parse_range(cfg.m_range), cgi::parse_range(cfg.n_range),
                                         cfg.component_losses(), cfg.reassign, cfg.noise_model());
    std::ostringstream csv;
    cgi::io::write_sweep_csv(csv, grid);
    if (cfg.out == "-") {
        std::cout << csv.str();
    } else {
        fs::path out = cfg.out.empty() ? output_dir(cfg) / "sweep.csv" : fs::path(cfg.out);
        if (out.has_parent_path())
            ensure_dir(out.parent_path());
        cgi::io::write_file(out, csv.str());
    }

    if (!cfg.svg_dir.empty()) {
        ensure_dir(cfg.svg_dir);
        std::vector<std::string> metrics = cfg.svg_metrics;
        if (metrics.empty())
            metrics.assign(cgi::io::kSweepColumns.begin() + 2, cgi::io::kSweepColumns.end());
        for (const auto& m : metrics)
            cgi::io::write_file(fs::path(cfg.svg_dir) / (m + ".svg"), cgi::svg::sweep_heatmap(grid, m));
    }
    return kExitOk;
}

int cmd_image(const cgi::RunConfig& cfg) {
    const auto params = cfg.protocol_params();
    const auto source = cfg.source_model();
    std::optional<fs::path> phase;
    if (!cfg.phase.empty())
        phase = cfg.phase;
    const cgi::Mask mask = cgi::io::load_mask(cfg.mask, phase);

    const auto counts = cgi::simulate_exposure(mask, params, source, cfg.reassign, {cfg.threads});
    const auto estimate = cgi::reconstruct(counts);
    const auto dose = cgi::dose_map(mask, params, source);

    const fs::path dir = output_dir(cfg);
    ensure_dir(dir);
    std::ostringstream counts_csv, estimate_csv, dose_csv;
    cgi::io::write_counts_csv(counts_csv, counts);
    cgi::io::write_estimate_csv(estimate_csv, estimate);
    cgi::io::write_dose_csv(dose_csv, dose);
    cgi::io::write_file(dir / "counts.csv", counts_csv.str());
    cgi::io::write_file(dir / "estimate.csv", estimate_csv.str());
    cgi::io::write_file(dir / "dose.csv", dose_csv.str());
    cgi::io::write_pgm(dir / "threshold.pgm", cgi::io::threshold_to_pgm(estimate.blocked));

    nlohmann::json meta = cfg;
    cgi::io::write_file(dir / "run.json", meta.dump(2) + "\n");

    if (estimate.ambiguous)
        std::cerr << "warning: threshold is ambiguous (no counts or indistinguishable classes)\n";
    return kExitOk;
}

/// Pulls "--config FILE" out of argv so JSON values can seed the defaults
/// before flags are parsed.
std::optional<std::string> find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc)
            return std::string(argv[i + 1]);
        if (a.rfind("--config=", 0) == 0)
            return a.substr(9);
    }
    return std::nullopt;
}

void add_protocol_options(CLI::App* sub, cgi::RunConfig& cfg) {
    sub->add_option("--m", cfg.m, "outer cycles M (>= 2)");
    sub->add_option("--n", cfg.n, "inner cycles N (>= 1)");
    sub->add_option("--outer-rotation", cfg.outer_rotation, "outer rotation angle, rad (default pi/M)");
    sub->add_option("--inner-rotation", cfg.inner_rotation, "inner rotation angle, rad (default pi/N)");
    sub->add_option("--losses", cfg.losses, "loss preset: ideal | fig6");
    sub->add_option("--hwp-loss", cfg.hwp_loss, "loss per half-wave-plate pass");
    sub->add_option("--pbs-loss", cfg.pbs_loss, "loss per polarizing splitter traversal");
    sub->add_option("--mirror-loss", cfg.mirror_loss, "loss per outer cycle");
    sub->add_option("--heralding", cfg.heralding, "heralding efficiency");
}

} // namespace

int main(int argc, char** argv) {
    cgi::RunConfig cfg;
    try {
        if (auto path = find_config_path(argc, argv)) {
            const auto text = cgi::io::read_file(*path);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(text);
            } catch (const nlohmann::json::exception& e) {
                throw cgi::InvalidParameter("config " + *path + ": " + e.what());
            }
            cgi::from_json(j, cfg);
        }
    } catch (const cgi::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App app{"Counterfactual ghost imaging simulator"};
    app.require_subcommand(1);
    std::string write_config;

    auto* probs = app.add_subcommand("probs", "outcome distribution of one protocol run");
    add_protocol_options(probs, cfg);
    probs->add_flag("--blocked", cfg.blocked, "opaque object (t = 0, default)");
    probs->add_flag("--open", cfg.open, "open channel (t = 1)");
    probs->add_option("--t-re", cfg.t_re, "real part of the transmittance");
    probs->add_option("--t-im", cfg.t_im, "imaginary part of the transmittance");

    auto* sweep = app.add_subcommand("sweep", "metric grid over (M, N)");
    sweep->add_option("--m-range", cfg.m_range, "M range a:b[:step]");
    sweep->add_option("--n-range", cfg.n_range, "N range a:b[:step]");
    sweep->add_option("--losses", cfg.losses, "loss preset: ideal | fig6");
    sweep->add_option("--hwp-loss", cfg.hwp_loss, "loss per half-wave-plate pass");
    sweep->add_option("--pbs-loss", cfg.pbs_loss, "loss per polarizing splitter traversal");
    sweep->add_option("--mirror-loss", cfg.mirror_loss, "loss per outer cycle");
    sweep->add_option("--heralding", cfg.heralding, "heralding efficiency");
    sweep->add_flag("--reassign", cfg.reassign, "count DL coincidences as D0");
    sweep->add_option("--noise", cfg.noise, "noise model: poisson | binomial");
    sweep->add_option("--out", cfg.out, "CSV output path ('-' for stdout)");
    sweep->add_option("--out-dir", cfg.out_dir, "output directory when --out is not given");
    sweep->add_option("--svg-dir", cfg.svg_dir, "write one SVG heatmap per metric here");
    sweep->add_option("--svg-metrics", cfg.svg_metrics, "metrics to plot (default: all)");

    auto* image = app.add_subcommand("image", "Monte Carlo ghost imaging of a mask");
    add_protocol_options(image, cfg);
    image->add_option("--mask", cfg.mask, "mask graymap (P2/P5); 0 = opaque, maxval = open");
    image->add_option("--phase", cfg.phase, "optional phase CSV in radians");
    image->add_option("--n-bar", cfg.n_bar, "mean photon pairs per pixel");
    image->add_option("--seed", cfg.seed, "RNG seed");
    image->add_option("--blur", cfg.blur, "idler-signal correlation blur, pixels");
    image->add_flag("--reassign", cfg.reassign, "count DL coincidences as D0");
    image->add_option("--out-dir", cfg.out_dir, "output directory");
    image->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");

    for (auto* sub : {probs, sweep, image}) {
        sub->add_option("--config", "JSON config with keys equal to flag names");
        sub->add_option("--write-config", write_config, "write the effective config as JSON and continue");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    for (auto* sub : {probs, sweep, image})
        if (sub->parsed())
            cfg.command = sub->get_name();

    try {
        cfg.validate();
        if (!write_config.empty()) {
            nlohmann::json j = cfg;
            cgi::io::write_file(write_config, j.dump(2) + "\n");
        }
        if (cfg.command == "probs")
            return cmd_probs(cfg);
        if (cfg.command == "sweep")
            return cmd_sweep(cfg);
        return cmd_image(cfg);
    } catch (const cgi::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const cgi::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}
