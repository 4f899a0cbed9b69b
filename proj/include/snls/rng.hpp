#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, stream, counter), so sampling is reproducible under any execution
// order or thread count.

#include <cstdint>
#include <cmath>

namespace snls {

// SplitMix64 finalizer: full avalanche on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t counter_word(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) noexcept {
    std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (stream + 0x2545f4914f6cdd1dULL));
    h = mix64(h ^ (counter + 0x6a09e667f3bcc909ULL));
    return h;
}

// Stream ids are namespaced per purpose so independent samplers never share
// a counter sequence.
constexpr std::uint64_t stream_id(std::uint32_t purpose, std::uint32_t sub) noexcept {
    return (static_cast<std::uint64_t>(purpose) << 32) | sub;
}

inline constexpr std::uint32_t kStreamPathIncrement = 1;  // sub = channel
inline constexpr std::uint32_t kStreamBridge = 2;         // sub = (level << 16) | channel
inline constexpr std::uint32_t kStreamFieldSample = 3;    // sub = sample purpose
inline constexpr std::uint32_t kStreamTimeEnvelope = 4;

// Uniform in the open interval (0,1); never returns 0 or 1.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t w = counter_word(seed, stream, counter);
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller; one value per counter.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u = uniform01(seed, stream, 2 * counter);
    const double v = uniform01(seed, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.28318530717958647692 * v);
}

}  // namespace snls
