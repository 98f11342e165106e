#pragma once

#include <vector>

#include "cgi/zeno.hpp"

namespace cgi {

/// Reference figures for the earlier interaction-free ghost imaging scheme.
/// Used for comparison only; they are not derived here.
inline constexpr double kZhangInteractionLimit = 0.735;
inline constexpr double kZhangVisibility = 0.5625;
inline constexpr double kZhangSnrIntRatio = 1.18;

/// Variance model for |dN_D0 - dN_D1|.
enum class NoiseModel {
    PoissonSum, ///< four independent Poisson streams, var = Nbar * sum(p)
    Binomial,   ///< four independent binomial streams, var = Nbar * sum(p (1 - p))
};

/// Blocked-minus-open probability shifts at D0 and D1, per generated photon.
struct DetectorDeltas {
    double dp_d0{0};
    double dp_d1{0};
};

struct MetricPoint {
    int m{0};
    int n{0};
    double p_int{0};
    double p_d0_err{0};       ///< D0 probability with the object blocking
    double snr_cgi_factor{0}; ///< f(M, N), SNR per generated photon in units of SNR_GI
    double snr_int_ratio{0};  ///< f / sqrt(p_int), SNR at equal absorbed dose in units of SNR_GI
    double visibility{0};
};

/// Blocked and open outcome distributions, with DL optionally folded into D0.
struct ContrastPair {
    OutcomeDistributiond blocked;
    OutcomeDistributiond open;
};

ContrastPair contrast_pair(const ProtocolParamsd& params, bool reassign_dl);

/// Standard ghost imaging SNR for an opaque pixel, sqrt(n_bar).
double snr_gi(double n_bar);

DetectorDeltas detector_deltas(const ProtocolParamsd& params, bool reassign_dl);

/// f(M, N). Heralding scales the counts of this scheme and of the standard
/// scheme it is measured against by the same factor, so it cancels here.
double snr_cgi_factor(const ProtocolParamsd& params, bool reassign_dl,
                      NoiseModel noise = NoiseModel::PoissonSum);

/// Returns +infinity when the object absorbs nothing.
double snr_int_ratio(const ProtocolParamsd& params, bool reassign_dl,
                     NoiseModel noise = NoiseModel::PoissonSum);

/// |dp_d0 - dp_d1| / 2.
double visibility(const ProtocolParamsd& params, bool reassign_dl);

MetricPoint evaluate_point(const ProtocolParamsd& params, bool reassign_dl,
                           NoiseModel noise = NoiseModel::PoissonSum);

struct IntRange {
    int first{0};
    int last{0}; ///< inclusive
    int step{1};

    std::vector<int> values() const;
};

/// One MetricPoint per (M, N), M-major, N ascending within each M.
std::vector<MetricPoint> sweep_metrics(const IntRange& m_range, const IntRange& n_range,
                                       const ComponentLossesd& losses, bool reassign_dl,
                                       NoiseModel noise = NoiseModel::PoissonSum);

} // namespace cgi
