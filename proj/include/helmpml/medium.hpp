// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <vector>
#include <stdexcept>

#include "helmpml/linalg.hpp"
#include "helmpml/smoothstep.hpp"

namespace helmpml {

struct Point {
  double x = 0.0, y = 0.0, z = 0.0;
  double r() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Scatterer coefficients: symmetric positive definite A_scat and positive
/// c_scat, both equal to the identity / 1 outside B_{R_scat}.
class MediumSpec {
 public:
  static MediumSpec homogeneous(double R_scat) {
    MediumSpec m;
    m.R_scat_ = R_scat;
    m.radial_ = true;
    m.identity_A_ = true;
    return m;
  }

  /// c_scat(r) = 1 + amp * bump((r - lo)/(hi - lo)), supported in the
  /// annulus lo < r < hi which must sit inside B_{R_scat}.
  static MediumSpec radial_bump(double R_scat, double amp, double lo, double hi) {
    if (!(hi > lo && lo >= 0.0 && hi <= R_scat))
      throw std::invalid_argument("radial_bump: support outside [0, R_scat]");
    if (amp <= -1.0) throw std::invalid_argument("radial_bump: c would vanish");
    MediumSpec m;
    m.R_scat_ = R_scat;
    m.radial_ = true;
    m.identity_A_ = true;
    m.c_radial_ = [amp, lo, hi](double r) {
      return 1.0 + amp * smooth_bump((r - lo) / (hi - lo));
    };
    m.breakpoints_ = {lo, hi};
    return m;
  }

  /// Fully general coefficients (2D); caller promises the support condition.
  static MediumSpec general(double R_scat, std::function<MatD(const Point&)> A,
                            std::function<double(const Point&)> c) {
    MediumSpec m;
    m.R_scat_ = R_scat;
    m.radial_ = false;
    m.identity_A_ = false;
    m.A_ = std::move(A);
    m.c_ = std::move(c);
    return m;
  }

  double R_scat() const { return R_scat_; }
  bool radial() const { return radial_; }
  bool identity_A() const { return identity_A_; }

  MatD A(const Point& p, int d) const {
    if (identity_A_) return MatD::identity(d);
    return A_(p);
  }

  double c(const Point& p) const {
    if (c_) return c_(p);
    if (c_radial_) return c_radial_(p.r());
    return 1.0;
  }

  double c_radial(double r) const {
    if (!radial_) throw std::logic_error("c_radial on non-radial medium");
    if (c_radial_) return c_radial_(r);
    return 1.0;
  }

  /// Radii where the radial profile loses analyticity (bump edges); used as
  /// collocation breakpoints.
  const std::vector<double>& radial_breakpoints() const { return breakpoints_; }

 private:
  double R_scat_ = 0.0;
  bool radial_ = true;
  bool identity_A_ = true;
  std::vector<double> breakpoints_;
  std::function<double(double)> c_radial_;
  std::function<MatD(const Point&)> A_;
  std::function<double(const Point&)> c_;
};

}  // namespace helmpml
