#pragma once

#include <cstdint>

#include "jointvol/normal.hpp"

namespace jointvol {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based uniform draw on the open interval (0,1). Each (seed, stream,
// index) triple addresses one draw, so substreams are independent of
// evaluation order and thread partitioning.
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t index) {
    const std::uint64_t h = mix64(seed ^ mix64(stream ^ mix64(index)));
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal draw by inverse-CDF transform of a counter-based uniform.
inline double counter_normal(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t index) {
    return inverse_norm_cdf(counter_uniform(seed, stream, index));
}

} // namespace jointvol
