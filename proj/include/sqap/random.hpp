#pragma once

#include <cstdint>
#include <random>

namespace sqap {

// mt19937_64 output is fixed by the standard; the distributions are not.
// These helpers keep streams bit-identical across standard libraries.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

inline Rng make_rng(std::int64_t seed) {
  return Rng(static_cast<std::uint64_t>(seed));
}

}  // namespace sqap
