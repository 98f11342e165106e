#include "cgi/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "cgi/counter_rng.hpp"

namespace cgi {

namespace {

// Stream identifiers of the keyed RNG.
constexpr std::uint32_t kPoissonStream = 1;
constexpr std::uint32_t kFateStream = 2;
constexpr std::uint32_t kBlurStream = 3;
constexpr std::uint32_t kBulkStream = 4;

using Cdf = std::array<double, 5>;

Cdf cumulative(const OutcomeDistributiond& d) {
    const auto p = d.as_array();
    Cdf cdf{};
    double acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += std::max(p[i], 0.0);
        cdf[i] = acc;
    }
    for (double& c : cdf)
        c /= acc;
    cdf.back() = 1.0;
    return cdf;
}

Fate draw_fate(const Cdf& cdf, double u) {
    std::size_t i = 0;
    while (i + 1 < cdf.size() && u >= cdf[i])
        ++i;
    return kAllFates[i];
}

unsigned worker_count(ExecutionOptions exec, std::size_t work) {
    unsigned n = exec.threads ? exec.threads : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, work)));
}

struct Tally {
    CountGrid c_d0, c_d1, c_dl, absorbed;

    Tally(int h, int w)
        : c_d0(CountGrid::Zero(h, w)), c_d1(CountGrid::Zero(h, w)), c_dl(CountGrid::Zero(h, w)),
          absorbed(CountGrid::Zero(h, w)) {}

    Tally& operator+=(const Tally& o) {
        c_d0 += o.c_d0;
        c_d1 += o.c_d1;
        c_dl += o.c_dl;
        absorbed += o.absorbed;
        return *this;
    }
};

/// Where the idler of photon `photon` from object pixel (x, y) lands on the ICCD.
/// Returns false if it misses the frame.
bool iccd_pixel(const Philox4x32& gen, const SourceModel& source, std::uint64_t pixel, std::uint64_t photon,
                int x, int y, int w, int h, int& ix, int& iy) {
    ix = x;
    iy = y;
    if (source.correlation_blur_px <= 0)
        return true;
    const auto u = keyed_uniforms(gen, {pixel, photon, kBlurStream});
    const double r = std::sqrt(-2.0 * std::log1p(-u[0])) * source.correlation_blur_px;
    const double phi = 2.0 * std::numbers::pi * u[1];
    ix = static_cast<int>(std::lround(x + r * std::cos(phi)));
    iy = static_cast<int>(std::lround(y + r * std::sin(phi)));
    return ix >= 0 && iy >= 0 && ix < w && iy < h;
}

/// Runs `per_pixel(tally, pixel_index)` over all pixels on a pool of threads and
/// merges the per-thread tallies by addition.
template <typename Fn>
Tally run_pixels(int w, int h, ExecutionOptions exec, Fn per_pixel) {
    const std::size_t total = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const unsigned workers = worker_count(exec, total);
    std::vector<Tally> partial(workers, Tally(h, w));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < workers; ++k) {
            pool.emplace_back([&, k] {
                for (std::size_t p = k; p < total; p += workers)
                    per_pixel(partial[k], p);
            });
        }
    }
    Tally sum(h, w);
    for (const auto& t : partial)
        sum += t;
    return sum;
}

std::int64_t draw_photon_count(std::uint64_t seed, std::uint64_t pixel, double n_bar) {
    KeyedEngine engine(seed, {pixel, 0, kPoissonStream});
    std::poisson_distribution<std::int64_t> poisson(n_bar);
    return poisson(engine);
}

} // namespace

Mask::Mask(ComplexGrid transmittance) : t(std::move(transmittance)) {
    for (Eigen::Index i = 0; i < t.size(); ++i)
        Transmittanced{t(i)}; // validates
}

Mask Mask::uniform(int width, int height, std::complex<double> value) {
    if (width < 1 || height < 1)
        throw InvalidParameter("mask dimensions must be positive");
    return Mask(ComplexGrid::Constant(height, width, value));
}

Mask Mask::from_polar(const RealGrid& magnitude, const RealGrid& phase) {
    if (magnitude.rows() != phase.rows() || magnitude.cols() != phase.cols())
        throw InvalidParameter("magnitude and phase dimensions differ");
    if ((magnitude < 0).any() || (magnitude > 1).any())
        throw InvalidParameter("magnitude must lie in [0, 1]");
    ComplexGrid t(magnitude.rows(), magnitude.cols());
    for (Eigen::Index i = 0; i < t.size(); ++i)
        t(i) = std::polar(magnitude(i), phase(i));
    return Mask(std::move(t));
}

void SourceModel::validate() const {
    if (!(n_bar > 0) || !std::isfinite(n_bar))
        throw InvalidParameter("n_bar must be positive and finite");
    if (!(heralding_efficiency >= 0 && heralding_efficiency <= 1))
        throw InvalidParameter("heralding efficiency must lie in [0, 1]");
    if (!(correlation_blur_px >= 0) || !std::isfinite(correlation_blur_px))
        throw InvalidParameter("correlation blur must be non-negative");
}

std::array<std::int64_t, 5> sample_outcomes(const OutcomeDistributiond& dist, std::int64_t samples,
                                            std::uint64_t seed) {
    if (samples < 0)
        throw InvalidParameter("sample count must be non-negative");
    const Cdf cdf = cumulative(dist);
    const Philox4x32 gen(seed);
    std::array<std::int64_t, 5> counts{};
    for (std::int64_t j = 0; j < samples; ++j) {
        const auto u = keyed_uniforms(gen, {0, static_cast<std::uint64_t>(j), kBulkStream});
        ++counts[static_cast<std::size_t>(draw_fate(cdf, u[0]))];
    }
    return counts;
}

CoincidenceCounts simulate_exposure(const Mask& mask, const ProtocolParamsd& params, const SourceModel& source,
                                    bool reassign_dl, ExecutionOptions exec) {
    params.validate();
    source.validate();
    const int w = mask.width();
    const int h = mask.height();
    const Philox4x32 gen(source.seed);

    Tally tally = run_pixels(w, h, exec, [&](Tally& out, std::size_t p) {
        const int x = static_cast<int>(p % static_cast<std::size_t>(w));
        const int y = static_cast<int>(p / static_cast<std::size_t>(w));
        const Cdf cdf = cumulative(run_protocol(params, mask.at(x, y)));
        const std::int64_t k = draw_photon_count(source.seed, p, source.n_bar);
        for (std::int64_t j = 0; j < k; ++j) {
            const auto photon = static_cast<std::uint64_t>(j);
            const auto u = keyed_uniforms(gen, {p, photon, kFateStream});
            const Fate fate = draw_fate(cdf, u[0]);
            if (fate == Fate::Object) {
                ++out.absorbed(y, x);
                continue;
            }
            if (fate == Fate::Component || u[1] >= source.heralding_efficiency)
                continue;
            int ix, iy;
            if (!iccd_pixel(gen, source, p, photon, x, y, w, h, ix, iy))
                continue;
            switch (fate) {
            case Fate::D0: ++out.c_d0(iy, ix); break;
            case Fate::D1: ++out.c_d1(iy, ix); break;
            case Fate::Dl: ++(reassign_dl ? out.c_d0 : out.c_dl)(iy, ix); break;
            default: break;
            }
        }
    });

    CoincidenceCounts counts{std::move(tally.c_d0), std::move(tally.c_d1), std::move(tally.c_dl),
                             std::move(tally.absorbed), {Scheme::Counterfactual, params, source, reassign_dl}};
    return counts;
}

CoincidenceCounts compare_standard_gi(const Mask& mask, const SourceModel& source, ExecutionOptions exec) {
    source.validate();
    const int w = mask.width();
    const int h = mask.height();
    const Philox4x32 gen(source.seed);

    Tally tally = run_pixels(w, h, exec, [&](Tally& out, std::size_t p) {
        const int x = static_cast<int>(p % static_cast<std::size_t>(w));
        const int y = static_cast<int>(p / static_cast<std::size_t>(w));
        const double transmit = mask.at(x, y).intensity();
        const std::int64_t k = draw_photon_count(source.seed, p, source.n_bar);
        for (std::int64_t j = 0; j < k; ++j) {
            const auto photon = static_cast<std::uint64_t>(j);
            const auto u = keyed_uniforms(gen, {p, photon, kFateStream});
            if (u[0] >= transmit) {
                ++out.absorbed(y, x);
                continue;
            }
            if (u[1] >= source.heralding_efficiency)
                continue;
            int ix, iy;
            if (iccd_pixel(gen, source, p, photon, x, y, w, h, ix, iy))
                ++out.c_d0(iy, ix);
        }
    });

    ExposureMetadata meta;
    meta.scheme = Scheme::Standard;
    meta.source = source;
    return {std::move(tally.c_d0), std::move(tally.c_d1), std::move(tally.c_dl), std::move(tally.absorbed), meta};
}

std::pair<double, double> expected_contrast(const ExposureMetadata& meta) {
    const double eta = meta.source.heralding_efficiency;
    if (meta.scheme == Scheme::Standard)
        return {0.0, -eta}; // d = -bucket / n_bar
    auto d_of = [&](const Transmittanced& t) {
        const auto dist = run_protocol(meta.params, t);
        const double d0 = dist.p_d0 + (meta.reassign_dl ? dist.p_dl : 0.0);
        return eta * (dist.p_d1 - d0);
    };
    return {d_of(Transmittanced::blocked()), d_of(Transmittanced::open())};
}

ImageEstimate reconstruct(const CoincidenceCounts& counts) {
    const double n_bar = counts.meta.source.n_bar;
    if (!(n_bar > 0))
        throw InvalidParameter("counts carry a non-positive n_bar");
    ImageEstimate est;
    est.d = (counts.c_d1 - counts.c_d0).cast<double>() / n_bar;
    std::tie(est.expected_blocked, est.expected_open) = expected_contrast(counts.meta);
    est.threshold = 0.5 * (est.expected_blocked + est.expected_open);

    const bool no_counts = (counts.c_d0 == 0).all() && (counts.c_d1 == 0).all() && (counts.c_dl == 0).all();
    est.ambiguous = no_counts || est.expected_blocked == est.expected_open;
    if (est.expected_blocked >= est.expected_open)
        est.blocked = est.d > est.threshold;
    else
        est.blocked = est.d < est.threshold;
    return est;
}

RealGrid dose_map(const Mask& mask, const ProtocolParamsd& params, const SourceModel& source) {
    params.validate();
    source.validate();
    RealGrid dose(mask.height(), mask.width());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            dose(y, x) = source.n_bar * run_protocol(params, mask.at(x, y)).p_object;
    return dose;
}

RealGrid standard_gi_dose_map(const Mask& mask, const SourceModel& source) {
    source.validate();
    return source.n_bar * (1.0 - mask.t.abs2().min(1.0));
}

} // namespace cgi
