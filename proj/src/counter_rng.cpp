#include "cgi/counter_rng.hpp"

namespace cgi {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

Philox4x32::Counter counter_of(const StreamKey& k) {
    // pixel (32 bits) | photon (64 bits) | stream (32 bits)
    return {static_cast<std::uint32_t>(k.pixel), static_cast<std::uint32_t>(k.photon),
            static_cast<std::uint32_t>(k.photon >> 32), k.stream ^ (static_cast<std::uint32_t>(k.pixel >> 32) << 16)};
}

} // namespace

Philox4x32::Counter Philox4x32::operator()(Counter ctr) const {
    Key k = key_;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ k[0], lo1, hi0 ^ ctr[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return ctr;
}

std::array<double, 2> keyed_uniforms(const Philox4x32& gen, const StreamKey& key) {
    const auto r = gen(counter_of(key));
    return {to_unit_double(r[0], r[1]), to_unit_double(r[2], r[3])};
}

KeyedEngine::result_type KeyedEngine::operator()() {
    if (used_ == 4) {
        block_ = gen_(counter_of(key_));
        ++key_.photon;
        used_ = 0;
    }
    return block_[used_++];
}

} // namespace cgi
