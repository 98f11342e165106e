#include "cgi/metrics.hpp"

#include <cmath>
#include <limits>

namespace cgi {

namespace {

void fold_dl_into_d0(OutcomeDistributiond& d) {
    d.p_d0 += d.p_dl;
    d.p_dl = 0;
}

double noise_scale(const ContrastPair& c, NoiseModel noise) {
    const double p[4] = {c.blocked.p_d0, c.open.p_d0, c.blocked.p_d1, c.open.p_d1};
    double var = 0;
    for (double x : p)
        var += noise == NoiseModel::PoissonSum ? x : x * (1 - x);
    return std::sqrt(var);
}

} // namespace

ContrastPair contrast_pair(const ProtocolParamsd& params, bool reassign_dl) {
    ContrastPair c{run_protocol(params, Transmittanced::blocked()), run_protocol(params, Transmittanced::open())};
    if (reassign_dl) {
        fold_dl_into_d0(c.blocked);
        fold_dl_into_d0(c.open);
    }
    return c;
}

double snr_gi(double n_bar) {
    if (!(n_bar > 0) || !std::isfinite(n_bar))
        throw InvalidParameter("mean photon number must be positive and finite");
    return std::sqrt(n_bar);
}

static DetectorDeltas deltas_of(const ContrastPair& c) {
    return {c.blocked.p_d0 - c.open.p_d0, c.blocked.p_d1 - c.open.p_d1};
}

DetectorDeltas detector_deltas(const ProtocolParamsd& params, bool reassign_dl) {
    return deltas_of(contrast_pair(params, reassign_dl));
}

static double f_of(const ContrastPair& c, NoiseModel noise) {
    const DetectorDeltas d = deltas_of(c);
    const double sigma = noise_scale(c, noise);
    if (!(sigma > 0))
        throw UndefinedMetric("SNR undefined: no detector counts in either condition");
    return std::abs(d.dp_d0 - d.dp_d1) / sigma;
}

double snr_cgi_factor(const ProtocolParamsd& params, bool reassign_dl, NoiseModel noise) {
    return f_of(contrast_pair(params, reassign_dl), noise);
}

static double int_ratio(double f, double p_int) {
    if (p_int <= 0)
        return std::numeric_limits<double>::infinity();
    return f / std::sqrt(p_int);
}

double snr_int_ratio(const ProtocolParamsd& params, bool reassign_dl, NoiseModel noise) {
    const ContrastPair c = contrast_pair(params, reassign_dl);
    return int_ratio(f_of(c, noise), c.blocked.p_object);
}

double visibility(const ProtocolParamsd& params, bool reassign_dl) {
    const DetectorDeltas d = detector_deltas(params, reassign_dl);
    return std::abs(d.dp_d0 - d.dp_d1) / 2;
}

MetricPoint evaluate_point(const ProtocolParamsd& params, bool reassign_dl, NoiseModel noise) {
    const ContrastPair c = contrast_pair(params, reassign_dl);
    const DetectorDeltas d = deltas_of(c);
    MetricPoint pt;
    pt.m = params.outer_cycles;
    pt.n = params.inner_cycles;
    pt.p_int = c.blocked.p_object;
    pt.p_d0_err = c.blocked.p_d0;
    pt.snr_cgi_factor = f_of(c, noise);
    pt.snr_int_ratio = int_ratio(pt.snr_cgi_factor, pt.p_int);
    pt.visibility = std::abs(d.dp_d0 - d.dp_d1) / 2;
    return pt;
}

std::vector<int> IntRange::values() const {
    if (step < 1)
        throw InvalidParameter("range step must be >= 1");
    if (last < first)
        throw InvalidParameter("empty range");
    std::vector<int> v;
    for (int x = first; x <= last; x += step)
        v.push_back(x);
    return v;
}

std::vector<MetricPoint> sweep_metrics(const IntRange& m_range, const IntRange& n_range,
                                       const ComponentLossesd& losses, bool reassign_dl, NoiseModel noise) {
    const auto ms = m_range.values();
    const auto ns = n_range.values();
    std::vector<MetricPoint> grid;
    grid.reserve(ms.size() * ns.size());
    for (int m : ms)
        for (int n : ns)
            grid.push_back(evaluate_point(ProtocolParamsd::make(m, n, losses), reassign_dl, noise));
    return grid;
}

} // namespace cgi
