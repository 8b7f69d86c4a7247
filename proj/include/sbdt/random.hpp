#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sbdt/common.hpp"

namespace sbdt {

// All randomness in the project goes through mt19937_64 plus the helpers
// below. The engine is fully specified by the standard and the helpers avoid
// std::*_distribution, whose output is implementation-defined, so identical
// seeds give identical streams on every platform.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Box-Muller pair of independent standard normals.
inline void gaussian_pair(Rng& rng, double& z0, double& z1) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  z0 = r * std::cos(a);
  z1 = r * std::sin(a);
}

}  // namespace sbdt
