#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace cgi {

/// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
/// A keyed bijection on 128-bit counters; output depends only on (key, counter).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    Counter operator()(Counter ctr) const;

private:
    Key key_;
};

/// Addresses one random block: (pixel, photon, stream).
struct StreamKey {
    std::uint64_t pixel{0};
    std::uint64_t photon{0};
    std::uint32_t stream{0};
};

/// 53-bit uniform double in [0, 1).
inline double to_unit_double(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

/// Two independent uniforms in [0, 1) for the block addressed by `key`.
std::array<double, 2> keyed_uniforms(const Philox4x32& gen, const StreamKey& key);

/// UniformRandomBitGenerator that walks successive counters of one stream,
/// so standard distributions can draw from a reproducible keyed sequence.
class KeyedEngine {
public:
    using result_type = std::uint32_t;

    KeyedEngine(std::uint64_t seed, StreamKey key) : gen_(seed), key_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

private:
    Philox4x32 gen_;
    StreamKey key_;
    Philox4x32::Counter block_{};
    int used_{4};
};

} // namespace cgi
