// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace helmpml::bessel {

/// Cylinder functions of integer order at a single real argument.
struct Pair {
  double J, dJ, Y, dY;
  std::complex<double> H() const { return {J, Y}; }
  std::complex<double> dH() const { return {dJ, dY}; }
};

/// J_0..J_nmax and Y_0..Y_nmax at z, with derivatives.  Y_n grows rapidly
/// for n >> z; orders whose Y would overflow are reported via
/// `valid_orders` (J entries are always valid).
struct JYArrays {
  std::vector<double> J, dJ, Y, dY;
  int valid_orders;  // Y/dY usable for n < valid_orders
};

JYArrays jy_arrays(int nmax, double z);

/// Single-order evaluation with range checking:
/// 0 <= n <= 2000 and 1e-8 <= z <= 1e4; throws std::domain_error outside
/// and std::range_error if Y_n(z) overflows the double range.
Pair bessel_pair(int n, double z);

/// DtN coefficient of angular mode n on the circle of radius R:
/// k * H1_n'(kR) / H1_n(kR).
std::complex<double> dtn_coefficient(int n, double k, double R);

/// Logarithmic derivative J_n'(z)/J_n(z) by continued fraction; stable for
/// any z > 0 including arguments where J_n itself underflows.
double j_log_derivative(int n, double z);

}  // namespace helmpml::bessel
