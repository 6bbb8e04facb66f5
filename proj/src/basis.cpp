// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "helmpml/quadrature.hpp"

namespace helmpml::quad {

Rule1D gauss_legendre(int n) {
  Rule1D r;
  r.x.resize(size_t(n));
  r.w.resize(size_t(n));
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-based initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[size_t(n - 1 - i)] = x;
    r.w[size_t(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

TriRule triangle_rule(int deg) {
  const int n = deg / 2 + 1;  // Gauss exactness 2n-1 >= deg
  const auto g = gauss_legendre(n);
  TriRule tr;
  tr.xi.reserve(size_t(n) * n);
  for (int iu = 0; iu < n; ++iu)
    for (int iv = 0; iv < n; ++iv) {
      const double u = 0.5 * (g.x[size_t(iu)] + 1.0);  // [0,1]
      const double v = 0.5 * (g.x[size_t(iv)] + 1.0);
      tr.xi.push_back(u * (1.0 - v));
      tr.eta.push_back(v);
      tr.w.push_back(0.25 * g.w[size_t(iu)] * g.w[size_t(iv)] * (1.0 - v));
    }
  return tr;
}

}  // namespace helmpml::quad

namespace helmpml::basis {

void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, d0 = 0.0, p1 = x, d1 = 1.0;
  if (n == 0) {
    p = p0;
    dp = d0;
    return;
  }
  for (int j = 2; j <= n; ++j) {
    const double a = (2.0 * j - 1.0) / j, b = (j - 1.0) / j;
    const double p2 = a * x * p1 - b * p0;
    const double d2 = a * (p1 + x * d1) - b * d0;
    p0 = p1;
    d0 = d1;
    p1 = p2;
    d1 = d2;
  }
  p = p1;
  dp = d1;
}

void jacobi11(int n, double x, double& p, double& dp) {
  // alpha = beta = 1 recurrence
  double p0 = 1.0, d0 = 0.0;
  if (n == 0) {
    p = p0;
    dp = d0;
    return;
  }
  double p1 = 2.0 * x, d1 = 2.0;
  for (int j = 2; j <= n; ++j) {
    // P^11_j = ((2j+1)(j+1) x P^11_{j-1} - (j+1) j P^11_{j-2}) / (j (j+2))
    const double jj = j;
    const double p2 = ((2.0 * jj + 1.0) * (jj + 1.0) * x * p1 -
                       (jj + 1.0) * jj * p0) /
                      (jj * (jj + 2.0));
    const double d2 = ((2.0 * jj + 1.0) * (jj + 1.0) * (p1 + x * d1) -
                       (jj + 1.0) * jj * d0) /
                      (jj * (jj + 2.0));
    p0 = p1;
    d0 = d1;
    p1 = p2;
    d1 = d2;
  }
  p = p1;
  dp = d1;
}

int shape_count(int p) { return (p + 1) * (p + 2) / 2; }
int interior_count(int p) { return (p - 1) * (p - 2) / 2; }

void shapes(int p, double xi, double eta, const std::array<int, 3>& edge_sign,
            ShapeValues& out) {
  if (p < 1 || p > 12) throw std::invalid_argument("shapes: p outside [1, 12]");
  const int nloc = shape_count(p);
  out.value.assign(size_t(nloc), 0.0);
  out.grad.assign(size_t(nloc), {0.0, 0.0});

  const double lam[3] = {1.0 - xi - eta, xi, eta};
  const double dlam[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

  for (int v = 0; v < 3; ++v) {
    out.value[size_t(v)] = lam[v];
    out.grad[size_t(v)] = {dlam[v][0], dlam[v][1]};
  }
  int idx = 3;
  // edges: e0 = (1,2), e1 = (2,0), e2 = (0,1)
  const int ev[3][2] = {{1, 2}, {2, 0}, {0, 1}};
  for (int e = 0; e < 3; ++e) {
    int a = ev[e][0], b = ev[e][1];
    if (edge_sign[size_t(e)] < 0) std::swap(a, b);
    const double la = lam[a], lb = lam[b];
    const double s = lb - la;
    const double ds[2] = {dlam[b][0] - dlam[a][0], dlam[b][1] - dlam[a][1]};
    const double dprod[2] = {dlam[a][0] * lb + la * dlam[b][0],
                             dlam[a][1] * lb + la * dlam[b][1]};
    for (int q = 2; q <= p; ++q, ++idx) {
      double ker, dker;
      jacobi11(q - 2, s, ker, dker);
      out.value[size_t(idx)] = la * lb * ker;
      out.grad[size_t(idx)] = {dprod[0] * ker + la * lb * dker * ds[0],
                               dprod[1] * ker + la * lb * dker * ds[1]};
    }
  }
  // interior bubbles lam0 lam1 lam2 P_i(lam1 - lam0) P_j(2 lam2 - 1)
  const double bub = lam[0] * lam[1] * lam[2];
  const double dbub[2] = {
      dlam[0][0] * lam[1] * lam[2] + lam[0] * dlam[1][0] * lam[2] +
          lam[0] * lam[1] * dlam[2][0],
      dlam[0][1] * lam[1] * lam[2] + lam[0] * dlam[1][1] * lam[2] +
          lam[0] * lam[1] * dlam[2][1]};
  const double s1 = lam[1] - lam[0];
  const double ds1[2] = {dlam[1][0] - dlam[0][0], dlam[1][1] - dlam[0][1]};
  const double s2 = 2.0 * lam[2] - 1.0;
  const double ds2[2] = {2.0 * dlam[2][0], 2.0 * dlam[2][1]};
  for (int i = 0; i + 3 <= p; ++i)
    for (int j = 0; i + j + 3 <= p; ++j, ++idx) {
      double pi, dpi, pj, dpj;
      legendre(i, s1, pi, dpi);
      legendre(j, s2, pj, dpj);
      out.value[size_t(idx)] = bub * pi * pj;
      out.grad[size_t(idx)] = {
          dbub[0] * pi * pj + bub * (dpi * ds1[0] * pj + pi * dpj * ds2[0]),
          dbub[1] * pi * pj + bub * (dpi * ds1[1] * pj + pi * dpj * ds2[1])};
    }
  if (idx != nloc) throw std::logic_error("shapes: count mismatch");
}

}  // namespace helmpml::basis
