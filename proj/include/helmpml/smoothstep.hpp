// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace helmpml {

/// The C-infinity step S(t) = g(t) / (g(t) + g(1-t)) with g(t) = exp(-1/t)
/// for t > 0 and g = 0 otherwise.  S vanishes identically for t <= 0 and
/// equals 1 identically for t >= 1, with all derivatives matching.
struct SmoothStep {
  double s;
  double ds;
  double dds;
};

namespace detail {

struct ExpKernel {
  double g, dg, ddg;
};

inline ExpKernel exp_kernel(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  // exp(-1/t) underflows for t < ~1/745; the zero limit is exact there.
  const double inv = 1.0 / t;
  const double g = std::exp(-inv);
  if (g == 0.0) return {0.0, 0.0, 0.0};
  const double dg = g * inv * inv;              // g / t^2
  const double ddg = g * (1.0 - 2.0 * t) * inv * inv * inv * inv;
  return {g, dg, ddg};
}

}  // namespace detail

inline SmoothStep smooth_step(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  const auto a = detail::exp_kernel(t);
  const auto b = detail::exp_kernel(1.0 - t);
  // b' and b'' below are derivatives with respect to t of g(1-t).
  const double bp = -b.dg;
  const double bpp = b.ddg;
  const double q = a.g + b.g;
  const double num = a.dg * b.g - a.g * bp;     // (a' b - a b')
  const double s = a.g / q;
  const double ds = num / (q * q);
  const double num2 = a.ddg * b.g - a.g * bpp;  // d/dt of num
  const double dds = num2 / (q * q) - 2.0 * num * (a.dg + bp) / (q * q * q);
  return {s, ds, dds};
}

/// Step from 1 down to 0 over [lo, hi]; identically 1 below lo and
/// identically 0 above hi.
inline SmoothStep smooth_step_down(double r, double lo, double hi) {
  const double w = hi - lo;
  const SmoothStep up = smooth_step((r - lo) / w);
  return {1.0 - up.s, -up.ds / w, -up.dds / (w * w)};
}

/// C-infinity bump supported in (0,1), normalized so b(1/2) = 1.
inline double smooth_bump(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(1.0 - 0.25 / (t * (1.0 - t)));
}

}  // namespace helmpml
