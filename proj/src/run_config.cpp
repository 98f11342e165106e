#include "cgi/run_config.hpp"

#include <charconv>
#include <set>

namespace cgi {

namespace {

int to_int(const std::string& s, const std::string& what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidParameter("bad " + what + " '" + s + "'");
    return v;
}

template <typename T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    if (v)
        j[key] = *v;
}

template <typename T>
void get(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key))
        j.at(key).get_to(out);
}

template <typename T>
void get(const nlohmann::json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key))
        return;
    if (j.at(key).is_null())
        out.reset();
    else
        out = j.at(key).get<T>();
}

const std::set<std::string> kKeys{
    "command", "m", "n", "outer-rotation", "inner-rotation", "losses", "hwp-loss", "pbs-loss", "mirror-loss",
    "heralding", "blocked", "open", "t-re", "t-im", "m-range", "n-range", "reassign", "noise", "out", "svg-dir",
    "svg-metrics", "mask", "phase", "n-bar", "seed", "blur", "out-dir", "threads"};

} // namespace

IntRange parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    IntRange r;
    if (parts.size() == 1) {
        r.first = r.last = to_int(parts[0], "range");
    } else if (parts.size() == 2 || parts.size() == 3) {
        r.first = to_int(parts[0], "range start");
        r.last = to_int(parts[1], "range end");
        if (parts.size() == 3)
            r.step = to_int(parts[2], "range step");
    } else {
        throw InvalidParameter("bad range '" + text + "', expected a:b or a:b:step");
    }
    r.values(); // rejects empty ranges and bad steps
    return r;
}

ComponentLossesd loss_preset(const std::string& name) {
    if (name == "ideal")
        return ComponentLossesd::ideal();
    if (name == "fig6")
        return ComponentLossesd::fig6();
    throw InvalidParameter("unknown loss preset '" + name + "' (expected ideal or fig6)");
}

ComponentLossesd RunConfig::component_losses() const {
    ComponentLossesd l = loss_preset(losses);
    if (hwp_loss) l.hwp_loss = *hwp_loss;
    if (pbs_loss) l.pbs_loss = *pbs_loss;
    if (mirror_loss) l.mirror_loss_per_outer_cycle = *mirror_loss;
    if (heralding) l.heralding_efficiency = *heralding;
    l.validate();
    return l;
}

ProtocolParamsd RunConfig::protocol_params() const {
    ProtocolParamsd p;
    p.outer_cycles = m;
    p.inner_cycles = n;
    p.outer_rotation_override = outer_rotation;
    p.inner_rotation_override = inner_rotation;
    p.losses = component_losses();
    p.validate();
    return p;
}

Transmittanced RunConfig::transmittance() const {
    if (blocked && open)
        throw InvalidParameter("--blocked and --open are mutually exclusive");
    const bool explicit_t = t_re.has_value() || t_im.has_value();
    if (explicit_t && (blocked || open))
        throw InvalidParameter("--t-re/--t-im cannot be combined with --blocked or --open");
    if (open)
        return Transmittanced::open();
    if (explicit_t)
        return Transmittanced(std::complex<double>(t_re.value_or(0.0), t_im.value_or(0.0)));
    return Transmittanced::blocked();
}

SourceModel RunConfig::source_model() const {
    SourceModel s;
    s.n_bar = n_bar;
    s.heralding_efficiency = component_losses().heralding_efficiency;
    s.seed = seed;
    s.correlation_blur_px = blur;
    s.validate();
    return s;
}

NoiseModel RunConfig::noise_model() const {
    if (noise == "poisson")
        return NoiseModel::PoissonSum;
    if (noise == "binomial")
        return NoiseModel::Binomial;
    throw InvalidParameter("unknown noise model '" + noise + "' (expected poisson or binomial)");
}

void RunConfig::validate() const {
    if (command == "probs") {
        protocol_params();
        transmittance();
    } else if (command == "sweep") {
        component_losses();
        parse_range(m_range);
        parse_range(n_range);
        if (parse_range(m_range).first < 2)
            throw InvalidParameter("M range must start at >= 2");
        if (parse_range(n_range).first < 1)
            throw InvalidParameter("N range must start at >= 1");
        noise_model();
    } else if (command == "image") {
        protocol_params();
        source_model();
        if (mask.empty())
            throw InvalidParameter("--mask is required");
    } else {
        throw InvalidParameter("unknown command '" + command + "'");
    }
}

void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{
        {"command", c.command}, {"m", c.m}, {"n", c.n}, {"losses", c.losses},
        {"blocked", c.blocked}, {"open", c.open}, {"m-range", c.m_range}, {"n-range", c.n_range},
        {"reassign", c.reassign}, {"noise", c.noise}, {"out", c.out}, {"svg-dir", c.svg_dir},
        {"svg-metrics", c.svg_metrics}, {"mask", c.mask}, {"phase", c.phase}, {"n-bar", c.n_bar},
        {"seed", c.seed}, {"blur", c.blur}, {"out-dir", c.out_dir}, {"threads", c.threads},
    };
    put_optional(j, "outer-rotation", c.outer_rotation);
    put_optional(j, "inner-rotation", c.inner_rotation);
    put_optional(j, "hwp-loss", c.hwp_loss);
    put_optional(j, "pbs-loss", c.pbs_loss);
    put_optional(j, "mirror-loss", c.mirror_loss);
    put_optional(j, "heralding", c.heralding);
    put_optional(j, "t-re", c.t_re);
    put_optional(j, "t-im", c.t_im);
}

void from_json(const nlohmann::json& j, RunConfig& c) {
    if (!j.is_object())
        throw InvalidParameter("config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!kKeys.count(key))
            throw InvalidParameter("unknown config key '" + key + "'");
    try {
        get(j, "command", c.command);
        get(j, "m", c.m);
        get(j, "n", c.n);
        get(j, "outer-rotation", c.outer_rotation);
        get(j, "inner-rotation", c.inner_rotation);
        get(j, "losses", c.losses);
        get(j, "hwp-loss", c.hwp_loss);
        get(j, "pbs-loss", c.pbs_loss);
        get(j, "mirror-loss", c.mirror_loss);
        get(j, "heralding", c.heralding);
        get(j, "blocked", c.blocked);
        get(j, "open", c.open);
        get(j, "t-re", c.t_re);
        get(j, "t-im", c.t_im);
        get(j, "m-range", c.m_range);
        get(j, "n-range", c.n_range);
        get(j, "reassign", c.reassign);
        get(j, "noise", c.noise);
        get(j, "out", c.out);
        get(j, "svg-dir", c.svg_dir);
        get(j, "svg-metrics", c.svg_metrics);
        get(j, "mask", c.mask);
        get(j, "phase", c.phase);
        get(j, "n-bar", c.n_bar);
        get(j, "seed", c.seed);
        get(j, "blur", c.blur);
        get(j, "out-dir", c.out_dir);
        get(j, "threads", c.threads);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("bad config value: ") + e.what());
    }
}

} // namespace cgi
