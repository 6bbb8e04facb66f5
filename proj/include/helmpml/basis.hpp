// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

namespace helmpml::basis {

/// Legendre P_n(x) with derivative.
void legendre(int n, double x, double& p, double& dp);

/// Jacobi P_n^{(1,1)}(x) with derivative (edge-kernel polynomials).
void jacobi11(int n, double x, double& p, double& dp);

/// Hierarchical H1-conforming shape functions on the reference triangle
/// {xi, eta >= 0, xi + eta <= 1} for polynomial degree p:
///   3 vertex hats, 3(p-1) edge functions, (p-1)(p-2)/2 bubbles.
/// Edge q-function on edge (a, b): lam_a lam_b P_{q-2}^{(1,1)}(lam_b - lam_a),
/// where the (a, b) order follows the global edge orientation, passed in as
/// a per-edge sign (+1 keeps the local order, -1 swaps).
/// Local edges: e0 = (v1, v2), e1 = (v2, v0), e2 = (v0, v1).
struct ShapeValues {
  std::vector<double> value;                 // nloc entries
  std::vector<std::array<double, 2>> grad;   // reference gradients
};

int shape_count(int p);
int interior_count(int p);

void shapes(int p, double xi, double eta, const std::array<int, 3>& edge_sign,
            ShapeValues& out);

}  // namespace helmpml::basis
