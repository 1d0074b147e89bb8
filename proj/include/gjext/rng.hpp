#pragma once

#include <cstdint>

#include "gjext/vec.hpp"

namespace gjext {

/// Deterministic pseudo-random source for probe sweeps (splitmix64).
///
/// The generator is pinned rather than taken from <random> so that reports
/// are byte-identical across platforms and standard libraries; the seed is
/// recorded in every certificate.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Unbiased draw from {0, ..., bound-1}; bound >= 1.
  uint64_t below(uint64_t bound) {
    uint64_t min = (-bound) % bound;
    uint64_t r;
    do {
      r = next();
    } while (r < min);
    return r % bound;
  }

  /// Rational in [0,1) with denominator <= max_den.
  Rational unit_rational(uint64_t max_den) {
    uint64_t den = 1 + below(max_den);
    uint64_t num = below(den);
    return Rational(static_cast<long>(num), static_cast<long>(den));
  }

  /// Point in [0,1)^n with componentwise denominator <= max_den.
  RatVec unit_vector(int n, uint64_t max_den) {
    RatVec v(n);
    for (int i = 0; i < n; ++i) v[i] = unit_rational(max_den);
    return v;
  }

  /// Integer vector with components in {-range, ..., range}.
  RatVec lattice_vector(int n, long range) {
    RatVec v(n);
    for (int i = 0; i < n; ++i)
      v[i] = Rational(static_cast<long>(below(static_cast<uint64_t>(2 * range + 1))) - range);
    return v;
  }

 private:
  uint64_t state_;
};

}  // namespace gjext
