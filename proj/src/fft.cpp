// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace helmpml::fft {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void transform(std::complex<double>* a, int n, int sign) {
  if (!is_power_of_two(n)) throw std::invalid_argument("fft: n not 2^m");
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // Exact twiddle table; the incremental w *= wl recurrence drifts by
  // O(n eps), which the reconstruction identities cannot absorb.
  thread_local std::vector<std::complex<double>> table;
  thread_local int table_n = 0;
  if (table_n != n) {
    table.resize(size_t(n) / 2);
    for (int j = 0; j < n / 2; ++j) {
      const double ang = -2.0 * M_PI * j / n;
      table[size_t(j)] = {std::cos(ang), std::sin(ang)};
    }
    table_n = n;
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int stride = n / len;
    for (int i = 0; i < n; i += len) {
      for (int j = 0; j < len / 2; ++j) {
        std::complex<double> w = table[size_t(j) * stride];
        if (sign > 0) w = std::conj(w);
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

void transform_2d(std::complex<double>* a, int n, int sign) {
  std::vector<std::complex<double>> col(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) transform(a + size_t(r) * n, n, sign);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) col[size_t(r)] = a[size_t(r) * n + c];
    transform(col.data(), n, sign);
    for (int r = 0; r < n; ++r) a[size_t(r) * n + c] = col[size_t(r)];
  }
}

}  // namespace helmpml::fft
