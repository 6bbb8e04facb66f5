// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/cheb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace helmpml::cheb {

namespace {

std::vector<double> cgl_weights(int N) {
  std::vector<double> w(static_cast<size_t>(N) + 1);
  for (int j = 0; j <= N; ++j) {
    w[size_t(j)] = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == N) w[size_t(j)] *= 0.5;
  }
  return w;
}

}  // namespace

std::vector<double> cgl_nodes(double a, double b, int N) {
  std::vector<double> x(static_cast<size_t>(N) + 1);
  for (int j = 0; j <= N; ++j) {
    const double t = -std::cos(M_PI * j / N);  // ascending in [-1, 1]
    x[size_t(j)] = a + 0.5 * (b - a) * (t + 1.0);
  }
  x[0] = a;
  x[size_t(N)] = b;
  return x;
}

DenseMatrix diff_matrix(double a, double b, int N) {
  const auto x = cgl_nodes(a, b, N);
  const auto w = cgl_weights(N);
  DenseMatrix D(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      const double v = (w[size_t(j)] / w[size_t(i)]) / (x[size_t(i)] - x[size_t(j)]);
      D(i, j) = v;
      rowsum += v;
    }
    D(i, i) = -rowsum;
  }
  return D;
}

Complex PiecewiseChebFunction::eval(double r, bool derivative) const {
  if (domains_.empty()) throw std::logic_error("empty PiecewiseChebFunction");
  const double lo = domains_.front().a;
  const double hi = domains_.back().b;
  const double tol = 1e-12 * (std::abs(lo) + std::abs(hi) + 1.0);
  if (r < lo - tol || r > hi + tol)
    throw std::domain_error("PiecewiseChebFunction: evaluation out of range");
  r = std::clamp(r, lo, hi);
  size_t d = 0;
  while (d + 1 < domains_.size() && r > domains_[d].b) ++d;
  const auto& dom = domains_[d];
  const auto& vals = derivative ? dom.derivs : dom.values;
  const int N = int(dom.nodes.size()) - 1;
  const auto w = cgl_weights(N);
  Complex num = 0.0;
  double den = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double diff = r - dom.nodes[size_t(j)];
    if (std::abs(diff) < 1e-14 * (std::abs(r) + 1.0)) return vals[size_t(j)];
    const double c = w[size_t(j)] / diff;
    num += c * vals[size_t(j)];
    den += c;
  }
  return num / den;
}

namespace {

PiecewiseChebFunction solve_bvp_monolithic(const std::vector<double>& breakpoints,
                                           int N, const BvpCoefficients& coeffs,
                                           const BoundaryCondition& left,
                                           const BoundaryCondition& right) {
  const int ndom = int(breakpoints.size()) - 1;
  if (ndom < 1) throw std::invalid_argument("solve_bvp: need >= 2 breakpoints");
  for (int i = 0; i < ndom; ++i)
    if (!(breakpoints[size_t(i) + 1] > breakpoints[size_t(i)]))
      throw std::invalid_argument("solve_bvp: breakpoints not increasing");

  struct Dom {
    std::vector<double> x;
    DenseMatrix D;
    int offset;
  };
  std::vector<Dom> doms(static_cast<size_t>(ndom));
  int total = 0;
  for (int d = 0; d < ndom; ++d) {
    doms[size_t(d)].x = cgl_nodes(breakpoints[size_t(d)], breakpoints[size_t(d) + 1], N);
    doms[size_t(d)].D = diff_matrix(breakpoints[size_t(d)], breakpoints[size_t(d) + 1], N);
    doms[size_t(d)].offset = total;
    total += N + 1;
  }

  DenseMatrix A(total, total);
  std::vector<Complex> rhs(static_cast<size_t>(total), 0.0);
  int row = 0;

  auto put_bc = [&](const BoundaryCondition& bc, int d, int node) {
    const auto& dm = doms[size_t(d)];
    if (bc.kind == BoundaryCondition::Kind::Dirichlet) {
      A(row, dm.offset + node) = 1.0;
      rhs[size_t(row)] = bc.value;
    } else {
      for (int j = 0; j <= N; ++j) A(row, dm.offset + j) = dm.D(node, j);
      A(row, dm.offset + node) -= bc.dcoef;
      rhs[size_t(row)] = bc.value;
    }
    ++row;
  };

  put_bc(left, 0, 0);
  for (int d = 0; d < ndom; ++d) {
    const auto& dm = doms[size_t(d)];
    for (int i = 1; i < N; ++i) {
      const double r = dm.x[size_t(i)];
      const Complex a2 = coeffs.a2(r), a1 = coeffs.a1(r), a0 = coeffs.a0(r);
      for (int j = 0; j <= N; ++j) {
        Complex dd = 0.0;
        for (int m = 0; m <= N; ++m) dd += dm.D(i, m) * dm.D(m, j);
        A(row, dm.offset + j) = a2 * dd + a1 * dm.D(i, j);
      }
      A(row, dm.offset + i) += a0;
      rhs[size_t(row)] = coeffs.rhs(r);
      ++row;
    }
    if (d + 1 < ndom) {
      const auto& nx = doms[size_t(d) + 1];
      // continuity of V
      A(row, dm.offset + N) = 1.0;
      A(row, nx.offset) = -1.0;
      ++row;
      // continuity of V'
      for (int j = 0; j <= N; ++j) {
        A(row, dm.offset + j) += dm.D(N, j);
        A(row, nx.offset + j) -= nx.D(0, j);
      }
      ++row;
    }
  }
  put_bc(right, ndom - 1, N);
  if (row != total) throw std::logic_error("solve_bvp: row/unknown mismatch");

  // Row equilibration keeps the huge n^2/r^2 rows from poisoning the LU.
  for (int i = 0; i < total; ++i) {
    double mx = 0.0;
    for (int j = 0; j < total; ++j) mx = std::max(mx, std::abs(A(i, j)));
    if (mx == 0.0) continue;
    const double s = 1.0 / mx;
    for (int j = 0; j < total; ++j) A(i, j) *= s;
    rhs[size_t(i)] *= s;
  }

  const auto sol = A.solve(std::move(rhs));

  std::vector<PiecewiseChebFunction::Domain> out(static_cast<size_t>(ndom));
  for (int d = 0; d < ndom; ++d) {
    auto& dom = out[size_t(d)];
    const auto& dm = doms[size_t(d)];
    dom.a = breakpoints[size_t(d)];
    dom.b = breakpoints[size_t(d) + 1];
    dom.nodes = dm.x;
    dom.values.assign(sol.begin() + dm.offset, sol.begin() + dm.offset + N + 1);
    dom.derivs.assign(size_t(N) + 1, 0.0);
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j)
        dom.derivs[size_t(i)] += dm.D(i, j) * dom.values[size_t(j)];
  }
  return PiecewiseChebFunction(std::move(out));
}

}  // namespace

PiecewiseChebFunction solve_bvp(const std::vector<double>& breakpoints, int N,
                                const BvpCoefficients& coeffs,
                                const BoundaryCondition& left,
                                const BoundaryCondition& right) {
  // Substructured solve: each domain is condensed onto its two interface
  // values (particular solution plus two homogeneous lifts, one LU each),
  // then a small tridiagonal interface system couples the domains.  Falls
  // back to the monolithic solve if a domain block is near-singular.
  const int ndom = int(breakpoints.size()) - 1;
  if (ndom < 1) throw std::invalid_argument("solve_bvp: need >= 2 breakpoints");
  for (int i = 0; i < ndom; ++i)
    if (!(breakpoints[size_t(i) + 1] > breakpoints[size_t(i)]))
      throw std::invalid_argument("solve_bvp: breakpoints not increasing");

  struct Dom {
    std::vector<double> x;
    DenseMatrix D;
    std::vector<Complex> vp, h0, h1;  // particular + boundary lifts
    Complex dvp_l, dh0_l, dh1_l;      // V' of each at the left node
    Complex dvp_r, dh0_r, dh1_r;      // ... and at the right node
  };
  std::vector<Dom> doms(static_cast<size_t>(ndom));
  try {
    for (int d = 0; d < ndom; ++d) {
      auto& dm = doms[size_t(d)];
      const double a = breakpoints[size_t(d)], b = breakpoints[size_t(d) + 1];
      dm.x = cgl_nodes(a, b, N);
      dm.D = diff_matrix(a, b, N);
      DenseMatrix A(N + 1, N + 1);
      std::vector<Complex> rp(size_t(N) + 1, 0.0), r0 = rp, r1 = rp;
      A(0, 0) = 1.0;
      r0[0] = 1.0;
      for (int i = 1; i < N; ++i) {
        const double r = dm.x[size_t(i)];
        const Complex a2 = coeffs.a2(r), a1 = coeffs.a1(r), a0 = coeffs.a0(r);
        for (int j = 0; j <= N; ++j) {
          Complex dd = 0.0;
          for (int m = 0; m <= N; ++m) dd += dm.D(i, m) * dm.D(m, j);
          A(i, j) = a2 * dd + a1 * dm.D(i, j);
        }
        A(i, i) += a0;
        rp[size_t(i)] = coeffs.rhs(r);
      }
      A(N, N) = 1.0;
      r1[size_t(N)] = 1.0;
      // Row equilibration of the interior rows.
      for (int i = 1; i < N; ++i) {
        double mx = 0.0;
        for (int j = 0; j <= N; ++j) mx = std::max(mx, std::abs(A(i, j)));
        if (mx == 0.0) continue;
        const double sc = 1.0 / mx;
        for (int j = 0; j <= N; ++j) A(i, j) *= sc;
        rp[size_t(i)] *= sc;
      }
      const LuFactor lu(A);
      double amax = 0.0;
      for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) amax = std::max(amax, std::abs(A(i, j)));
      if (lu.min_pivot() < 1e-10 * amax)
        throw std::runtime_error("near-singular block");
      dm.vp = lu.solve(rp);
      dm.h0 = lu.solve(r0);
      dm.h1 = lu.solve(r1);
      auto dval = [&](const std::vector<Complex>& v, int node) {
        Complex s = 0.0;
        for (int j = 0; j <= N; ++j) s += dm.D(node, j) * v[size_t(j)];
        return s;
      };
      dm.dvp_l = dval(dm.vp, 0);
      dm.dh0_l = dval(dm.h0, 0);
      dm.dh1_l = dval(dm.h1, 0);
      dm.dvp_r = dval(dm.vp, N);
      dm.dh0_r = dval(dm.h0, N);
      dm.dh1_r = dval(dm.h1, N);
    }
  } catch (const std::runtime_error&) {
    return solve_bvp_monolithic(breakpoints, N, coeffs, left, right);
  }

  // Interface system for the ndom+1 junction values.
  const int m = ndom + 1;
  DenseMatrix T(m, m);
  std::vector<Complex> trhs(static_cast<size_t>(m), 0.0);
  {
    const auto& d0 = doms[0];
    if (left.kind == BoundaryCondition::Kind::Dirichlet) {
      T(0, 0) = 1.0;
      trhs[0] = left.value;
    } else {
      T(0, 0) = d0.dh0_l - left.dcoef;
      T(0, 1) = d0.dh1_l;
      trhs[0] = left.value - d0.dvp_l;
    }
  }
  for (int d = 1; d < ndom; ++d) {
    const auto& lft = doms[size_t(d) - 1];
    const auto& rgt = doms[size_t(d)];
    T(d, d - 1) = lft.dh0_r;
    T(d, d) = lft.dh1_r - rgt.dh0_l;
    T(d, d + 1) = -rgt.dh1_l;
    trhs[size_t(d)] = rgt.dvp_l - lft.dvp_r;
  }
  {
    const auto& dn = doms[size_t(ndom) - 1];
    if (right.kind == BoundaryCondition::Kind::Dirichlet) {
      T(m - 1, m - 1) = 1.0;
      trhs[size_t(m) - 1] = right.value;
    } else {
      T(m - 1, m - 2) = dn.dh0_r;
      T(m - 1, m - 1) = dn.dh1_r - right.dcoef;
      trhs[size_t(m) - 1] = right.value - dn.dvp_r;
    }
  }
  std::vector<Complex> junction;
  try {
    junction = T.solve(std::move(trhs));
  } catch (const std::runtime_error&) {
    return solve_bvp_monolithic(breakpoints, N, coeffs, left, right);
  }

  std::vector<PiecewiseChebFunction::Domain> out(static_cast<size_t>(ndom));
  for (int d = 0; d < ndom; ++d) {
    auto& dom = out[size_t(d)];
    const auto& dm = doms[size_t(d)];
    dom.a = breakpoints[size_t(d)];
    dom.b = breakpoints[size_t(d) + 1];
    dom.nodes = dm.x;
    dom.values.resize(size_t(N) + 1);
    const Complex va = junction[size_t(d)], vb = junction[size_t(d) + 1];
    for (int i = 0; i <= N; ++i)
      dom.values[size_t(i)] =
          dm.vp[size_t(i)] + va * dm.h0[size_t(i)] + vb * dm.h1[size_t(i)];
    dom.derivs.assign(size_t(N) + 1, 0.0);
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j)
        dom.derivs[size_t(i)] += dm.D(i, j) * dom.values[size_t(j)];
  }
  return PiecewiseChebFunction(std::move(out));
}

AdaptiveResult solve_bvp_adaptive(const std::vector<double>& breakpoints,
                                  const BvpCoefficients& coeffs,
                                  const BoundaryCondition& left,
                                  const BoundaryCondition& right,
                                  double rel_tol, int N_start, int N_max,
                                  double abs_floor) {
  const double lo = breakpoints.front(), hi = breakpoints.back();
  const int n_probe = 181;
  std::vector<double> probe(static_cast<size_t>(n_probe));
  for (int i = 0; i < n_probe; ++i)
    probe[size_t(i)] = lo + (hi - lo) * (i + 0.31) / double(n_probe);

  PiecewiseChebFunction prev = solve_bvp(breakpoints, N_start, coeffs, left, right);
  double prev_diff = 1e300;
  for (int N = 2 * N_start; N <= N_max; N *= 2) {
    PiecewiseChebFunction cur = solve_bvp(breakpoints, N, coeffs, left, right);
    double diff = 0.0, scale = abs_floor;
    for (double r : probe) {
      const Complex c = cur.value(r);
      diff = std::max(diff, std::abs(c - prev.value(r)));
      scale = std::max(scale, std::abs(c));
    }
    if (diff <= rel_tol * scale) return {std::move(cur), N, diff / scale};
    // Differences rising again while already near the target means the
    // roundoff floor of the spectral operator was reached.
    if (diff > prev_diff && prev_diff <= 10.0 * rel_tol * scale)
      return {std::move(prev), N / 2, prev_diff / scale};
    // Stagnation just above the target is the same floor seen sideways.
    if (diff <= 5.0 * rel_tol * scale && diff > 0.25 * prev_diff)
      return {std::move(cur), N, diff / scale};
    prev_diff = diff;
    prev = std::move(cur);
  }
  throw std::runtime_error("solve_bvp_adaptive: no self-convergence within budget");
}

}  // namespace helmpml::cheb
