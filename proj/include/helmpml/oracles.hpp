// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "helmpml/cheb.hpp"
#include "helmpml/medium.hpp"
#include "helmpml/pml_coefficients.hpp"

namespace helmpml::oracles {

using cheb::PiecewiseChebFunction;

/// Volume source for the radially decomposable problems, in the convention
/// c^2 div(A grad v) + k^2 v = -g  (equivalently (P_theta - k^2) v = g).
struct SourceSpec {
  enum class Kind { PlaneWave, Ring } kind = Kind::PlaneWave;
  // PlaneWave: scattering of exp(ik x.a) recast as a volume problem through
  // the cutoff chi (chi = 1 on r <= R_scat, chi = 0 on r >= R1); the modal
  // loads involve J_n and the chi derivatives.
  double phi_inc = 0.0;
  // Ring: g = profile(r) e^{i n phi} with profile supported in [R_scat, R1].
  int ring_n = 0;
  std::function<Complex(double)> ring_profile;

  static SourceSpec plane_wave(double phi_inc = 0.0) {
    SourceSpec s;
    s.kind = Kind::PlaneWave;
    s.phi_inc = phi_inc;
    return s;
  }
  static SourceSpec ring(int n, std::function<Complex(double)> profile) {
    SourceSpec s;
    s.kind = Kind::Ring;
    s.ring_n = n;
    s.ring_profile = std::move(profile);
    return s;
  }
};

struct ModeSolveOptions {
  double rel_tol = 2e-11;
  int N_start = 24;
  int N_max = 512;
  int green_N = 0;   // Green-integral grid resolution (0 = default)
  int fixed_N = 0;   // > 0: single solve at this degree, no doubling
  std::optional<double> obstacle_radius;  // Dirichlet inner boundary
};

/// Modal load g_n(r) of the plane-wave-induced source (phi_inc folded out;
/// modes pair symmetrically, so only n >= 0 is needed).
Complex plane_wave_modal_load(int n, double k, double R_scat, double R1, double r);

/// Solve the angular-mode-n radial PML problem on (inner, R_tr] with
/// V(R_tr) = 0; inner boundary is Dirichlet on the obstacle or the
/// J_n-asymptotic Robin relation at r_min = 1e-3/k.
PiecewiseChebFunction radial_mode_pml_solve(int n, double k, const PmlSetup& setup,
                                            const MediumSpec& medium,
                                            const std::function<Complex(double)>& g_n,
                                            const ModeSolveOptions& opts = {});

/// Exact outgoing solution of mode n: the Hankel Green-function integral for
/// homogeneous media, or a DtN-closed collocation solve for radial media.
PiecewiseChebFunction exact_outgoing_mode(int n, double k, const MediumSpec& medium,
                                          const std::function<Complex(double)>& g_n,
                                          double R1, double r_max,
                                          const ModeSolveOptions& opts = {});

/// Weighted-norm PML truncation error on B_{R1} (minus any obstacle):
/// compares the exact outgoing solution and the PML solution mode by mode.
struct TruncationError {
  double err_h1k;
  double g_l2;
  double ratio;
  int n_modes;
  std::vector<double> mode_errors;  // per |n|, H1_k contribution
};

TruncationError pml_truncation_error(double k, const PmlSetup& setup,
                                     const MediumSpec& medium,
                                     const SourceSpec& source,
                                     double tail_rel = 1e-13,
                                     const ModeSolveOptions& opts = {});

/// Total field u = u^I + u^S of plane-wave scattering by the sound-soft disk
/// of radius a (Hankel series).
std::vector<Complex> disk_scattering_total_field(double k, double a, double phi_inc,
                                                 const std::vector<Point>& pts);

/// Scattering cross-section both ways: angular-mode sum and the
/// forward-amplitude (optical theorem) evaluation.
struct CrossSections {
  double mode_sum;
  double forward_amplitude;
};
CrossSections disk_cross_sections(double k, double a);

/// Full modal PML solution v = sum_n V_n(r) e^{i n phi}, used as the
/// FEM-free reference.  Plane-wave sources fold the +-n symmetry.
class ModalExpansion {
 public:
  static ModalExpansion pml_solution(double k, const PmlSetup& setup,
                                     const MediumSpec& medium,
                                     const SourceSpec& source,
                                     double tail_rel = 1e-13,
                                     const ModeSolveOptions& opts = {});

  Complex value(double x, double y) const;
  /// value plus cartesian gradient
  void value_and_gradient(double x, double y, Complex& v, Complex& dx,
                          Complex& dy) const;

  double k() const { return k_; }
  int n_modes() const { return int(modes_.size()); }
  double inner_radius() const;
  double outer_radius() const;

  struct Mode {
    int n;                   // angular order >= 0
    bool fold;               // include the -n partner (plane-wave symmetry)
    Complex phase;           // e^{-i n phi_inc} factor of the +n mode
    PiecewiseChebFunction V;
  };
  const std::vector<Mode>& modes() const { return modes_; }

 private:
  double k_ = 0.0;
  std::vector<Mode> modes_;
};

/// Hermite-tabulated evaluator of a ModalExpansion for fast pointwise use
/// (FEM quadrature grids, torus sampling).
class TabulatedModal {
 public:
  TabulatedModal(const ModalExpansion& me, int points_per_wavelength = 160);
  void value_and_gradient(double x, double y, Complex& v, Complex& dx,
                          Complex& dy) const;
  Complex value(double x, double y) const;
  double k() const { return k_; }

 private:
  struct ModeTab {
    int n;
    bool fold;
    Complex phase;
    std::vector<Complex> V, dV, ddV;
  };
  double k_ = 0.0;
  double r0_ = 0.0, r1_ = 0.0, dr_ = 0.0;
  int n_r_ = 0;
  std::vector<ModeTab> modes_;
};

}  // namespace helmpml::oracles
