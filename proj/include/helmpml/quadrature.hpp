// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace helmpml::quad {

struct Rule1D {
  std::vector<double> x;  // nodes in (-1, 1)
  std::vector<double> w;
};

/// Gauss-Legendre rule, exact for polynomials of degree 2n-1.
Rule1D gauss_legendre(int n);

struct TriRule {
  std::vector<double> xi, eta, w;  // on the unit triangle {xi,eta>=0, xi+eta<=1}
  int size() const { return int(w.size()); }
};

/// Collapsed-coordinate product rule on the reference triangle, exact for
/// bivariate polynomials of total degree <= deg.
TriRule triangle_rule(int deg);

}  // namespace helmpml::quad
