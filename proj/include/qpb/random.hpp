#pragma once

#include <cstdint>

#include "qpb/multi_index.hpp"

namespace qpb {

/// Counter-based pseudo-random draws keyed by (seed, mode, channel).  Every
/// mode owns an independent stream, so enlarging the truncation ball extends
/// the data without reshuffling existing modes.
namespace rng {

inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mode_key(std::uint64_t seed, const MultiIndex& n) {
    std::uint64_t s = mix(seed ^ 0x243F6A8885A308D3ULL);
    for (int comp : n.comp)
        s = mix(s ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(comp)));
    return s;
}

/// Uniform draw on [0, 1) from channel `channel` of the keyed stream.
inline double uniform01(std::uint64_t key, std::uint32_t channel) {
    const std::uint64_t bits = mix(key ^ (0x9E3779B97F4A7C15ULL * (channel + 1)));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace rng

}  // namespace qpb
