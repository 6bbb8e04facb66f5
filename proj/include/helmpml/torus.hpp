// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "helmpml/linalg.hpp"

namespace helmpml::torus {

/// Periodic grid on the torus of half-period R_sharp, fundamental domain
/// [-R_sharp, R_sharp]^d, N points per dimension (power of two), d in {1,2}.
class TorusGrid {
 public:
  TorusGrid(double R_sharp, int N, int d);

  double R_sharp() const { return R_sharp_; }
  int N() const { return N_; }
  int dim() const { return d_; }
  size_t size() const { return d_ == 1 ? size_t(N_) : size_t(N_) * size_t(N_); }

  double coord(int idx) const { return -R_sharp_ + 2.0 * R_sharp_ * idx / N_; }
  /// integer frequency for a storage index (range [-N/2, N/2))
  int freq(int idx) const { return idx < N_ / 2 ? idx : idx - N_; }
  /// cell volume of the grid
  double cell_volume() const;

  /// Grid resolution rule for wavenumber k: pi N / (2 R_sharp) >= 4 k.
  bool resolves(double k) const;
  static int suggest_N(double R_sharp, double k);

 private:
  double R_sharp_;
  int N_;
  int d_;
};

/// Complex grid function with FFT coefficient access in the orthonormal
/// basis e_j(x) = (2 R_sharp)^{-d/2} exp(i pi j.x / R_sharp).
class TorusField {
 public:
  TorusField(const TorusGrid& grid, std::vector<Complex> values);
  static TorusField zero(const TorusGrid& grid);
  static TorusField from_function(const TorusGrid& grid,
                                  const std::function<Complex(double, double)>& f);
  static TorusField basis_mode(const TorusGrid& grid, std::array<int, 2> j);

  const TorusGrid& grid() const { return grid_; }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  Complex& at(int ix, int iy = 0);
  const Complex& at(int ix, int iy = 0) const;

  /// Fourier coefficients hat(j) stored in FFT index order.
  std::vector<Complex> coefficients() const;
  static TorusField from_coefficients(const TorusGrid& grid,
                                      std::vector<Complex> coeff);

  /// L2 norm on the torus (exact via the trapezoid-on-torus identity).
  double l2_norm() const;
  /// L2 norm restricted to |x| <= radius (grid-cell indicator).
  double l2_norm_within(double radius) const;

 private:
  TorusGrid grid_;
  std::vector<Complex> values_;
};

/// Scalar multiplier f(lambda_j) of the semiclassical Laplacian -hbar^2 Delta,
/// lambda_j = (pi |j| / (k R_sharp))^2 with hbar = 1/k.
struct MultiplierSpec {
  std::function<double(double)> f;
  double k;
};

TorusField apply_multiplier(const TorusField& field, const MultiplierSpec& spec);

/// sup of |f| over the resolved discrete spectrum.
double multiplier_sup(const TorusGrid& grid, const MultiplierSpec& spec);

/// Frequency cutoffs psi_mu(t) = psi(t/mu) built from the smooth step
/// (psi = 1 on [-1,1], supported in [-2,2]), with mu' = mu/2 and
/// Lambda = 2 mu.
struct Cutoffs {
  double mu;
  double mu_prime;
  double Lambda;
  std::function<double(double)> psi_mu;
  std::function<double(double)> psi_mu_prime;
};

Cutoffs build_cutoffs(double mu);

/// Radial spatial cutoff field: 1 on B_{R1(1+delta)}, 0 outside
/// B_{R1(1+2delta)}, smooth-step transition.
TorusField radial_cutoff_field(const TorusGrid& grid, double R1, double delta);

/// v = v_High + v_Low + v_PML with v_Low = psi_mu(-hbar^2 Delta)(phi v),
/// v_High = (1 - psi_mu)(-hbar^2 Delta)(phi v), v_PML = (1 - phi) v.
struct Decomposition {
  TorusField v_low;
  TorusField v_high;
  TorusField v_pml;
};

struct CutoffGeometry {
  double R1;
  double delta;
};

Decomposition decompose_solution(const TorusField& v, const TorusField& phi_tr,
                                 const CutoffGeometry& geom, double mu, double k);

/// Exact spectral derivative (pi i j / R_sharp)^alpha; alpha per dimension.
TorusField spectral_derivative(const TorusField& field, std::array<int, 2> alpha);

/// L2 norm of the alpha spectral derivative, computed in coefficient space.
double derivative_norm(const TorusField& field, std::array<int, 2> alpha);

/// Heat propagator exp(-t lambda_j) of -hbar^2 Delta (hbar = 1/k).
TorusField heat_propagator(const TorusField& field, double t, double k);

/// Fit of the per-order derivative norms against the three growth laws.
enum class GrowthClass { Entire, RadiusInvK, RadiusKIndependent, None };

struct GrowthFit {
  GrowthClass cls = GrowthClass::None;
  double C = 0.0;        // fitted growth constant
  double C_u = 0.0;      // fitted amplitude
  double r_squared = 0.0;
};

const char* growth_class_name(GrowthClass cls);

/// norms[m] = max_{|alpha| = m} ||d^alpha w||, m = 0..M.
GrowthFit classify_derivative_growth(const std::vector<double>& norms, double k);

/// Default mu rule: smallest value >= 4 with spectral mass above mu below
/// mass_tol of the total.
double choose_mu(const TorusField& v, double k, double mass_tol = 1e-3);

}  // namespace helmpml::torus
