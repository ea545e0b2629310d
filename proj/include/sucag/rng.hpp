#pragma once

#include <cstdint>
#include <random>

namespace sucag {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of one generator draw.
// Used instead of std::uniform_real_distribution so that streams are
// reproducible across standard library implementations.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, m) consuming exactly one draw. The floor map carries a
// bias of order 2^-53, which is negligible next to statistical noise at any
// sample count reachable here.
inline std::size_t uniform_index(Rng& rng, std::size_t m) {
  auto idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(m));
  return idx >= m ? m - 1 : idx;
}

// Uniform double in [lo, hi).
inline double uniform_range(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace sucag
