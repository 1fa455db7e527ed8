#pragma once

#include <cstdint>
#include <random>

namespace ido {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of the engine output,
/// so streams are reproducible across standard libraries.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

/// Uniform index in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform_unit(rng) * static_cast<double>(n));
}

}  // namespace ido
