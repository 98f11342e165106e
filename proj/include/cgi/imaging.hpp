/**
 * @file imaging.hpp
 * @brief Monte Carlo ghost imaging with coincidence counting.
 *
 * Each mask pixel is probed by a Poisson number of signal photons. Every
 * signal photon realizes one of the five fates of the chained-Zeno protocol
 * for that pixel's transmittance; detector clicks are heralded onto the ICCD
 * pixel of the partner photon. Random draws are keyed by (seed, pixel,
 * photon), so counts do not depend on the number of worker threads.
 */
#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "cgi/zeno.hpp"

namespace cgi {

template <typename T>
using Grid = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ComplexGrid = Grid<std::complex<double>>;
using RealGrid = Grid<double>;
using CountGrid = Grid<std::int64_t>;
using BoolGrid = Grid<bool>;

/// Object to be imaged: per-pixel complex transmittance, rows = y, cols = x.
struct Mask {
    ComplexGrid t;

    Mask() = default;
    explicit Mask(ComplexGrid transmittance);

    static Mask uniform(int width, int height, std::complex<double> t);
    /// Rejects mismatched dimensions and magnitudes outside [0, 1].
    static Mask from_polar(const RealGrid& magnitude, const RealGrid& phase);

    int width() const { return static_cast<int>(t.cols()); }
    int height() const { return static_cast<int>(t.rows()); }
    Transmittanced at(int x, int y) const { return Transmittanced(t(y, x)); }
};

struct SourceModel {
    double n_bar{1000};               ///< mean pairs per pixel per exposure
    double heralding_efficiency{1};
    std::uint64_t seed{0};
    double correlation_blur_px{0};    ///< std of idler-signal position mismatch, pixels

    void validate() const;
};

enum class Scheme { Counterfactual, Standard };

struct ExposureMetadata {
    Scheme scheme{Scheme::Counterfactual};
    ProtocolParamsd params;
    SourceModel source;
    bool reassign_dl{false};
};

/// Per-ICCD-pixel coincidence counts. For the standard scheme the bucket
/// coincidences are stored in c_d0. `absorbed` is indexed by object pixel
/// and counts every absorption, heralded or not.
struct CoincidenceCounts {
    CountGrid c_d0;
    CountGrid c_d1;
    CountGrid c_dl;
    CountGrid absorbed;
    ExposureMetadata meta;

    int width() const { return static_cast<int>(c_d0.cols()); }
    int height() const { return static_cast<int>(c_d0.rows()); }
};

struct ImageEstimate {
    RealGrid d;            ///< (c_d1 - c_d0) / n_bar
    BoolGrid blocked;      ///< thresholded map, true where the object blocks
    double threshold{0};
    double expected_blocked{0};
    double expected_open{0};
    bool ambiguous{false}; ///< no counts at all, or the two classes are indistinguishable
};

struct ExecutionOptions {
    unsigned threads{0}; ///< 0 = hardware concurrency
};

/// Counts of each fate over `samples` independent protocol runs.
std::array<std::int64_t, 5> sample_outcomes(const OutcomeDistributiond& dist, std::int64_t samples,
                                            std::uint64_t seed);

CoincidenceCounts simulate_exposure(const Mask& mask, const ProtocolParamsd& params, const SourceModel& source,
                                    bool reassign_dl, ExecutionOptions exec = {});

/// Standard ghost imaging: bucket click iff the photon is transmitted (|t|^2).
CoincidenceCounts compare_standard_gi(const Mask& mask, const SourceModel& source, ExecutionOptions exec = {});

/// Expected d for an opaque and for an open pixel under the exposure's settings.
std::pair<double, double> expected_contrast(const ExposureMetadata& meta);

ImageEstimate reconstruct(const CoincidenceCounts& counts);

/// Expected absorbed photons per pixel, n_bar * p_object(t).
RealGrid dose_map(const Mask& mask, const ProtocolParamsd& params, const SourceModel& source);

/// Expected absorbed photons per pixel for standard ghost imaging, n_bar (1 - |t|^2).
RealGrid standard_gi_dose_map(const Mask& mask, const SourceModel& source);

} // namespace cgi
