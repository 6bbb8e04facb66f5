// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace helmpml {

/// Deterministic xoshiro256++ generator.  Sequences depend only on the seed,
/// so experiment outputs are bit-reproducible across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed + 0x9e3779b97f4a7c15ULL;
    for (auto& word : state_) {
      // splitmix64 expansion of the seed
      x += 0x9e3779b97f4a7c15ULL;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  uint64_t next() {
    auto rotl = [](uint64_t v, int s) { return (v << s) | (v >> (64 - s)); };
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::complex<double> complex_unit_box() {
    return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
  }

  std::vector<std::complex<double>> complex_vector(size_t n) {
    std::vector<std::complex<double>> v(n);
    for (auto& z : v) z = complex_unit_box();
    return v;
  }

 private:
  uint64_t state_[4];
};

}  // namespace helmpml
