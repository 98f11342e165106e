#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgi/imaging.hpp"
#include "cgi/metrics.hpp"

namespace cgi {

/// Parameters of one CLI invocation. JSON keys equal the long flag names.
struct RunConfig {
    std::string command;

    // protocol
    int m{2};
    int n{1};
    std::optional<double> outer_rotation;
    std::optional<double> inner_rotation;
    std::string losses{"ideal"};
    std::optional<double> hwp_loss;
    std::optional<double> pbs_loss;
    std::optional<double> mirror_loss;
    std::optional<double> heralding;

    // probs
    bool blocked{false};
    bool open{false};
    std::optional<double> t_re;
    std::optional<double> t_im;

    // sweep
    std::string m_range{"2:10"};
    std::string n_range{"2:50"};
    bool reassign{false};
    std::string noise{"poisson"};
    std::string out;
    std::string svg_dir;
    std::vector<std::string> svg_metrics;

    // image
    std::string mask;
    std::string phase;
    double n_bar{1000};
    std::uint64_t seed{0};
    double blur{0};
    std::string out_dir;
    unsigned threads{0};

    ComponentLossesd component_losses() const;
    ProtocolParamsd protocol_params() const;
    Transmittanced transmittance() const;
    SourceModel source_model() const;
    NoiseModel noise_model() const;

    /// Throws InvalidParameter for out-of-range values or conflicting options of `command`.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

/// "a:b" or "a:b:step", or a single integer "a".
IntRange parse_range(const std::string& text);

/// Named loss presets: "ideal", "fig6".
ComponentLossesd loss_preset(const std::string& name);

void to_json(nlohmann::json& j, const RunConfig& c);
/// Missing keys keep their current values in `c`; unknown keys are rejected.
void from_json(const nlohmann::json& j, RunConfig& c);

} // namespace cgi
