// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "helmpml/medium.hpp"
#include "helmpml/pml_coefficients.hpp"
#include "helmpml/space.hpp"
#include "helmpml/sparse.hpp"

namespace helmpml::fem {

/// Volume data of (P_theta - k^2) v = g.
struct SourceTerm {
  enum class Kind {
    PlaneWave,  // scattered-field reformulation of exp(ik x.a)
    Volume,     // generic g, load weighted by 1/c^2 (the PML functional)
    Plain       // L2 data f with unweighted load (adjoint problems)
  } kind = Kind::PlaneWave;
  double phi_inc = 0.0;
  std::function<Complex(double, double)> g;

  static SourceTerm plane_wave(double phi_inc = 0.0) {
    return {Kind::PlaneWave, phi_inc, {}};
  }
  static SourceTerm volume(std::function<Complex(double, double)> g) {
    return {Kind::Volume, 0.0, std::move(g)};
  }
  static SourceTerm plain(std::function<Complex(double, double)> f) {
    return {Kind::Plain, 0.0, std::move(f)};
  }
};

/// Interior-dof Galerkin system: K = stiffness-with-coefficients, and the
/// plain stiffness S and mass M used for norms and the stability checks.
struct AssembledSystem {
  const HpSpace* space = nullptr;
  double k = 0.0;
  sparse::Csc K, S, M;
  std::vector<Complex> load;
  std::vector<std::array<double, 2>> coords;
  CoefficientBounds bounds;
};

AssembledSystem assemble(const HpSpace& space, const PmlSetup& setup,
                         const MediumSpec& medium, double k,
                         const SourceTerm& source);

/// Plane-wave volume data g(x) of the chi-window reformulation (used for
/// torus sampling and source-norm bookkeeping).
Complex plane_wave_source_value(double x, double y, double k, double phi_inc,
                                double R_scat, double R1);

/// Unweighted load vector (f, phi_i) over interior dofs.
std::vector<Complex> plain_load(const HpSpace& space,
                                const std::function<Complex(double, double)>& f);

struct GalerkinSolution {
  std::vector<Complex> coeffs;  // full dof vector, masked dofs zero
  double k = 0.0;
  double residual = 0.0;
};

/// Direct solve (nested-dissection LDL^T with refinement to 1e-10).
/// adjoint = true solves the conjugate-transpose system with its own
/// independent factorization.
GalerkinSolution solve(const AssembledSystem& sys, bool adjoint = false);
GalerkinSolution solve_with_rhs(const AssembledSystem& sys,
                                const std::vector<Complex>& rhs_interior,
                                bool adjoint = false);

struct StabilityReport {
  int n_samples = 0;
  int garding_failures = 0;
  int continuity_failures = 0;
  double worst_garding_slack = 0.0;    // most negative margin seen (>= 0 pass)
  double worst_continuity_ratio = 0.0; // max |a(v,w)| / (C ||v|| ||w||)
  CoefficientBounds constants;
  uint64_t seed = 0;
};

StabilityReport stability_checks(const AssembledSystem& sys, int n_samples,
                                 uint64_t seed);

struct QuasiOptReport {
  double err_galerkin = 0.0;
  double err_best = 0.0;
  double c_qo = 0.0;
};

/// Galerkin error vs best-approximation error in H1_k against a reference
/// field; throws if err_best is too close to the stated reference error.
QuasiOptReport quasioptimality_report(const AssembledSystem& sys,
                                      const FieldFn& reference,
                                      double reference_error_estimate);

struct EtaEstimate {
  double eta_hat = 0.0;
  double k_eta = 0.0;
  double threshold = 0.0;  // (1/C_cont) sqrt(A_+ / (2 (A_- + c_-^{-2})))
  bool below_threshold = false;
  int n_rhs = 0;
  double budget_gap = 0.0;  // overkill self-difference / measured eta gap
};

/// Lower bound on eta(V_N) by maximizing over random unit-L2 data; adjoint
/// solves run on an overkill space (degree + extra_p, meshwidth / h_div).
EtaEstimate estimate_eta(const HpSpace& vn, const PmlSetup& setup,
                         const MediumSpec& medium, double k, int n_rhs,
                         uint64_t seed, int extra_p = 3, int h_div = 4);

}  // namespace helmpml::fem
