// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "helmpml/linalg.hpp"

namespace helmpml::cheb {

/// Chebyshev-Gauss-Lobatto nodes on [a, b], ascending.
std::vector<double> cgl_nodes(double a, double b, int N);

/// Spectral differentiation matrix for the CGL nodes on [a, b]
/// (barycentric formula with the negative-sum diagonal).
DenseMatrix diff_matrix(double a, double b, int N);

/// Piecewise-Chebyshev complex function: per-domain node values plus the
/// spectrally differentiated values, evaluated by barycentric interpolation.
class PiecewiseChebFunction {
 public:
  struct Domain {
    double a, b;
    std::vector<double> nodes;
    std::vector<Complex> values;
    std::vector<Complex> derivs;
  };

  PiecewiseChebFunction() = default;
  explicit PiecewiseChebFunction(std::vector<Domain> domains)
      : domains_(std::move(domains)) {}

  Complex value(double r) const { return eval(r, false); }
  Complex deriv(double r) const { return eval(r, true); }
  double left() const { return domains_.front().a; }
  double right() const { return domains_.back().b; }
  const std::vector<Domain>& domains() const { return domains_; }

 private:
  Complex eval(double r, bool derivative) const;
  std::vector<Domain> domains_;
};

/// Second-order linear two-point boundary value problem
///   a2(r) V'' + a1(r) V' + a0(r) V = rhs(r)
/// collocated on multi-domain CGL grids with C^1 interface matching.
struct BvpCoefficients {
  std::function<Complex(double)> a2, a1, a0, rhs;
};

struct BoundaryCondition {
  enum class Kind { Dirichlet, Robin } kind = Kind::Dirichlet;
  Complex value{0.0};   // Dirichlet: V = value;  Robin: V' - dcoef V = value
  Complex dcoef{0.0};
  static BoundaryCondition dirichlet(Complex v = 0.0) {
    return {Kind::Dirichlet, v, 0.0};
  }
  static BoundaryCondition robin(Complex dcoef, Complex v = 0.0) {
    return {Kind::Robin, v, dcoef};
  }
};

/// Single solve at fixed per-domain degree N.
PiecewiseChebFunction solve_bvp(const std::vector<double>& breakpoints, int N,
                                const BvpCoefficients& coeffs,
                                const BoundaryCondition& left,
                                const BoundaryCondition& right);

/// Degree-doubling solve: doubles N until the sup-norm change on a probe
/// grid falls below rel_tol * max|V| (or abs_floor for near-zero solutions).
/// Throws if the budget N_max is exhausted without convergence.
struct AdaptiveResult {
  PiecewiseChebFunction solution;
  int N_used;
  double rel_change;
};

AdaptiveResult solve_bvp_adaptive(const std::vector<double>& breakpoints,
                                  const BvpCoefficients& coeffs,
                                  const BoundaryCondition& left,
                                  const BoundaryCondition& right,
                                  double rel_tol = 1e-11, int N_start = 16,
                                  int N_max = 512, double abs_floor = 1e-280);

}  // namespace helmpml::cheb
