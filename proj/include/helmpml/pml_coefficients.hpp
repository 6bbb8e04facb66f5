// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "helmpml/linalg.hpp"
#include "helmpml/medium.hpp"
#include "helmpml/scaling.hpp"

namespace helmpml {

/// Pointwise coefficient data of the complex-scaled operator:
///   A = H D H^T and c^{-2} = alpha beta^{d-1} in the scaling region,
///   A = A_scat and c^{-2} = c_scat^{-2} inside r < R1,
/// with alpha = 1 + i f_theta', beta = 1 + i f_theta / r and H the rotation
/// taking the first coordinate axis to the radial direction at x.
struct CoefficientSample {
  Complex alpha{1.0, 0.0};
  Complex beta{1.0, 0.0};
  MatD D;       // diagonal factor (identity inside r < R1)
  MatD H;       // rotation (identity inside r < R1)
  MatD A;       // complex symmetric coefficient tensor
  Complex c_inv2{1.0, 0.0};
};

CoefficientSample pml_tensor(const PmlSetup& setup, const MediumSpec& medium,
                             const Point& x);

/// alpha, beta at radius r (r >= R1 gives the scaled values; below R1 both
/// are exactly 1).
std::pair<Complex, Complex> alpha_beta(const PmlSetup& setup, double r);

/// Eigenvalues of Re D at radius r >= R1, ascending.  The d = 3 radial entry
/// uses the first-principles form Re(beta^2 conj(alpha)) / |alpha|^2.
std::vector<double> re_part_spectrum(const PmlSetup& setup, double r);

/// A smooth test field with closed-form derivatives to second order.
struct AnalyticField {
  std::function<Complex(const Point&)> value;
  std::function<std::array<Complex, 3>(const Point&)> gradient;
  std::function<MatD(const Point&)> hessian;  // d x d
};

AnalyticField plane_wave_field(double k, std::array<double, 3> direction, int d);
AnalyticField constant_field(Complex value, int d);

/// Relative residual of the identity  c^2 div(A grad u) = Delta_theta u  at a
/// point with |x| > R1, where the left side is evaluated from the cartesian
/// coefficient tensor (with analytic derivatives of A) and the right side
/// from the polar-coordinate form of the scaled Laplacian.
double operator_consistency_residual(const PmlSetup& setup,
                                     const MediumSpec& medium,
                                     const AnalyticField& u, const Point& x);

/// Half-plane / monotonicity diagnostics over a dense radial grid
/// (quantities tracked: alpha, beta^2/alpha, beta/alpha, alpha/beta).
struct AssumptionReport {
  struct Flagged {
    double r;
    double spread;  // argument spread at this radius
  };
  bool f_over_r_nondecreasing = true;
  double max_argument_spread = 0.0;  // max pairwise spread over the grid
  double max_abs_imag = 0.0;         // distance of tracked values to real axis
  /// Radii where the tracked values do not fit in a common closed
  /// half-plane (pairwise argument spread exceeding pi).
  std::vector<Flagged> half_plane_violations;
  /// Radii where arg(alpha) and arg(beta^2/alpha) differ by more than
  /// `wide_spread_threshold` (default pi/2) -- the plateau-then-steep
  /// warning sign.
  std::vector<Flagged> wide_spread_radii;
  double wide_spread_threshold;
};

AssumptionReport assumption_report(const PmlSetup& setup, int n_grid = 2000,
                                   double wide_spread_threshold = M_PI / 2.0);

/// Scanned bounds for the sesquilinear form at a fixed theta:
///   |(A xi, zeta)| <= A_plus |xi||zeta|,  Re(A xi, xi) >= A_minus |xi|^2,
///   |c^{-2}| <= c_minus_inv2,  Re c^{-2} <= c_min_inv2.
/// Computed by a 2000-point radial scan with a 5% safety margin.
struct CoefficientBounds {
  double A_plus;
  double A_minus;
  double c_minus_inv2;
  double c_min_inv2;
  double C_cont;  // max(A_plus, c_minus_inv2)
};

CoefficientBounds scan_coefficient_bounds(const PmlSetup& setup,
                                          const MediumSpec& medium,
                                          int n_grid = 2000);

}  // namespace helmpml
