// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/sparse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace helmpml::sparse {

Csc TripletBuilder::build() const {
  Csc a;
  a.n = n_;
  std::vector<Entry> sorted = entries_;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& x, const Entry& y) {
    return x.c != y.c ? x.c < y.c : x.r < y.r;
  });
  a.col_ptr.assign(size_t(n_) + 1, 0);
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i].c == sorted[i - 1].c && sorted[i].r == sorted[i - 1].r) {
      a.val.back() += sorted[i].v;
    } else {
      a.row_idx.push_back(sorted[i].r);
      a.val.push_back(sorted[i].v);
      ++a.col_ptr[size_t(sorted[i].c) + 1];
    }
  }
  for (int c = 0; c < n_; ++c) a.col_ptr[size_t(c) + 1] += a.col_ptr[size_t(c)];
  return a;
}

std::vector<Complex> matvec(const Csc& a, const std::vector<Complex>& x) {
  std::vector<Complex> y(size_t(a.n), 0.0);
  for (int c = 0; c < a.n; ++c)
    for (int p = a.col_ptr[size_t(c)]; p < a.col_ptr[size_t(c) + 1]; ++p)
      y[size_t(a.row_idx[size_t(p)])] += a.val[size_t(p)] * x[size_t(c)];
  return y;
}

std::vector<Complex> matvec_conj(const Csc& a, const std::vector<Complex>& x) {
  std::vector<Complex> y(size_t(a.n), 0.0);
  for (int c = 0; c < a.n; ++c)
    for (int p = a.col_ptr[size_t(c)]; p < a.col_ptr[size_t(c) + 1]; ++p)
      y[size_t(a.row_idx[size_t(p)])] += std::conj(a.val[size_t(p)]) * x[size_t(c)];
  return y;
}

Csc conjugate(const Csc& a) {
  Csc b = a;
  for (auto& v : b.val) v = std::conj(v);
  return b;
}

double transpose_asymmetry(const Csc& a) {
  double worst = 0.0;
  for (int c = 0; c < a.n; ++c)
    for (int p = a.col_ptr[size_t(c)]; p < a.col_ptr[size_t(c) + 1]; ++p) {
      const int r = a.row_idx[size_t(p)];
      if (r > c) continue;
      // find (c, r)
      Complex other = 0.0;
      const int lo = a.col_ptr[size_t(r)], hi = a.col_ptr[size_t(r) + 1];
      const auto it = std::lower_bound(a.row_idx.begin() + lo, a.row_idx.begin() + hi, c);
      if (it != a.row_idx.begin() + hi && *it == c)
        other = a.val[size_t(it - a.row_idx.begin())];
      worst = std::max(worst, std::abs(a.val[size_t(p)] - other));
    }
  return worst;
}

double max_abs(const Csc& a) {
  double m = 0.0;
  for (const auto& v : a.val) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Recursive coordinate-bisection nested dissection.  side A, side B, then
// the separator (frontier dofs of both halves), recursing on A and B.
void dissect(const Csc& a, const std::vector<std::array<double, 2>>& coords,
             std::vector<int>& nodes, std::vector<int>& order) {
  if (nodes.size() <= 48) {
    for (int v : nodes) order.push_back(v);
    return;
  }
  // split along the wider axis at the median
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (int v : nodes)
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], coords[size_t(v)][size_t(d)]);
      hi[d] = std::max(hi[d], coords[size_t(v)][size_t(d)]);
    }
  const int axis = (hi[0] - lo[0] >= hi[1] - lo[1]) ? 0 : 1;
  std::vector<int> work = nodes;
  const auto mid = work.begin() + long(work.size() / 2);
  std::nth_element(work.begin(), mid, work.end(), [&](int x, int y) {
    return coords[size_t(x)][size_t(axis)] < coords[size_t(y)][size_t(axis)];
  });
  const double cut = coords[size_t(*mid)][size_t(axis)];

  // membership: 0 = A, 1 = B; separator = A-side dofs adjacent to B
  std::vector<signed char> side(size_t(a.n), -1);
  for (int v : nodes)
    side[size_t(v)] = coords[size_t(v)][size_t(axis)] < cut ? 0 : 1;
  std::vector<int> A, B, S;
  for (int v : nodes) {
    if (side[size_t(v)] != 0) continue;
    bool frontier = false;
    for (int p = a.col_ptr[size_t(v)]; p < a.col_ptr[size_t(v) + 1]; ++p)
      if (side[size_t(a.row_idx[size_t(p)])] == 1) {
        frontier = true;
        break;
      }
    if (frontier) side[size_t(v)] = 2;
  }
  for (int v : nodes) {
    if (side[size_t(v)] == 0) A.push_back(v);
    else if (side[size_t(v)] == 1) B.push_back(v);
    else S.push_back(v);
  }
  if (A.empty() || B.empty()) {
    // degenerate geometry; fall back to the median split without separator
    for (int v : nodes) order.push_back(v);
    return;
  }
  dissect(a, coords, A, order);
  dissect(a, coords, B, order);
  for (int v : S) order.push_back(v);
}

}  // namespace

LdlSolver::LdlSolver(const Csc& a, const std::vector<std::array<double, 2>>& coords) {
  n_ = a.n;
  a_ = a;
  if (int(coords.size()) != n_) throw std::invalid_argument("LdlSolver: coords size");

  std::vector<int> all(static_cast<size_t>(n_));
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> order;
  order.reserve(size_t(n_));
  dissect(a, coords, all, order);
  perm_ = order;                 // perm_[new] = old
  iperm_.assign(size_t(n_), 0);  // iperm_[old] = new
  for (int i = 0; i < n_; ++i) iperm_[size_t(perm_[size_t(i)])] = i;

  // permuted upper-triangular pattern (row <= col in new numbering)
  std::vector<std::vector<std::pair<int, Complex>>> cols(static_cast<size_t>(n_));
  for (int c = 0; c < n_; ++c)
    for (int p = a.col_ptr[size_t(c)]; p < a.col_ptr[size_t(c) + 1]; ++p) {
      const int r = a.row_idx[size_t(p)];
      const int nr = iperm_[size_t(r)], nc = iperm_[size_t(c)];
      if (nr <= nc) cols[size_t(nc)].emplace_back(nr, a.val[size_t(p)]);
    }
  for (auto& col : cols)
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

  // elimination tree and column counts (LDL-style up-looking symbolic)
  std::vector<int> parent(static_cast<size_t>(n_), -1), flag(size_t(n_), -1), lnz(size_t(n_), 0);
  for (int k = 0; k < n_; ++k) {
    flag[size_t(k)] = k;
    for (const auto& [i0, v] : cols[size_t(k)]) {
      (void)v;
      int i = i0;
      while (i < k && flag[size_t(i)] != k) {
        if (parent[size_t(i)] == -1) parent[size_t(i)] = k;
        ++lnz[size_t(i)];
        flag[size_t(i)] = k;
        i = parent[size_t(i)];
      }
    }
  }
  lp_.assign(size_t(n_) + 1, 0);
  for (int c = 0; c < n_; ++c) lp_[size_t(c) + 1] = lp_[size_t(c)] + lnz[size_t(c)];
  li_.assign(size_t(lp_[size_t(n_)]), 0);
  lx_.assign(size_t(lp_[size_t(n_)]), Complex(0.0));
  d_.assign(size_t(n_), Complex(0.0));

  // numeric up-looking factorization
  std::vector<Complex> y(static_cast<size_t>(n_), Complex(0.0));
  std::vector<int> pattern(static_cast<size_t>(n_)), lfill(size_t(n_), 0);
  std::fill(flag.begin(), flag.end(), -1);
  min_pivot_ = 1e300;
  double dmax = 0.0;
  for (int k = 0; k < n_; ++k) {
    int top = n_;
    flag[size_t(k)] = k;
    for (const auto& [i0, v] : cols[size_t(k)]) {
      y[size_t(i0)] += v;
      int i = i0;
      int len = 0;
      std::array<int, 64> stack_local{};
      std::vector<int> deep;
      while (i < k && flag[size_t(i)] != k) {
        if (len < 64) stack_local[size_t(len)] = i;
        else deep.push_back(i);
        ++len;
        flag[size_t(i)] = k;
        i = parent[size_t(i)];
      }
      // unwind in reverse (descending toward the root ordering)
      for (int t = len - 1; t >= 0; --t) {
        const int node = t < 64 ? stack_local[size_t(t)] : deep[size_t(t) - 64];
        pattern[size_t(--top)] = node;
      }
    }
    Complex dk = y[size_t(k)];
    y[size_t(k)] = 0.0;
    for (int t = top; t < n_; ++t) {
      const int j = pattern[size_t(t)];
      const Complex yj = y[size_t(j)];
      y[size_t(j)] = 0.0;
      const Complex ljk = yj / d_[size_t(j)];
      // apply column j of L to the current row accumulation
      for (int p = lp_[size_t(j)]; p < lp_[size_t(j)] + lfill[size_t(j)]; ++p)
        y[size_t(li_[size_t(p)])] -= lx_[size_t(p)] * yj;
      dk -= ljk * yj;
      const int slot = lp_[size_t(j)] + lfill[size_t(j)]++;
      li_[size_t(slot)] = k;
      lx_[size_t(slot)] = ljk;
    }
    d_[size_t(k)] = dk;
    const double ad = std::abs(dk);
    min_pivot_ = std::min(min_pivot_, ad);
    dmax = std::max(dmax, ad);
    if (ad == 0.0 || (dmax > 0.0 && ad < 1e-14 * dmax))
      throw std::runtime_error(
          "LdlSolver: numerically singular matrix (pivot " + std::to_string(ad) +
          "); the wavenumber may sit at a discrete resonance");
  }
}

std::vector<Complex> LdlSolver::solve(const std::vector<Complex>& b) const {
  if (int(b.size()) != n_) throw std::invalid_argument("LdlSolver::solve size");
  std::vector<Complex> x(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) x[size_t(i)] = b[size_t(perm_[size_t(i)])];
  for (int j = 0; j < n_; ++j) {
    const Complex xj = x[size_t(j)];
    if (xj != Complex(0.0))
      for (int p = lp_[size_t(j)]; p < lp_[size_t(j) + 1]; ++p)
        x[size_t(li_[size_t(p)])] -= lx_[size_t(p)] * xj;
  }
  for (int j = 0; j < n_; ++j) x[size_t(j)] /= d_[size_t(j)];
  for (int j = n_ - 1; j >= 0; --j) {
    Complex s = x[size_t(j)];
    for (int p = lp_[size_t(j)]; p < lp_[size_t(j) + 1]; ++p)
      s -= lx_[size_t(p)] * x[size_t(li_[size_t(p)])];
    x[size_t(j)] = s;
  }
  std::vector<Complex> out(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) out[size_t(perm_[size_t(i)])] = x[size_t(i)];
  return out;
}

std::vector<Complex> LdlSolver::solve_refined(const std::vector<Complex>& b,
                                              double tol, int max_rounds) const {
  double bnorm = 0.0;
  for (const auto& v : b) bnorm += std::norm(v);
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) return std::vector<Complex>(size_t(n_), Complex(0.0));
  std::vector<Complex> x = solve(b);
  for (int round = 0; round <= max_rounds; ++round) {
    const auto ax = matvec(a_, x);
    std::vector<Complex> r(static_cast<size_t>(n_));
    double rnorm = 0.0;
    for (int i = 0; i < n_; ++i) {
      r[size_t(i)] = b[size_t(i)] - ax[size_t(i)];
      rnorm += std::norm(r[size_t(i)]);
    }
    rnorm = std::sqrt(rnorm);
    if (rnorm <= tol * bnorm) return x;
    const auto dx = solve(r);
    for (int i = 0; i < n_; ++i) x[size_t(i)] += dx[size_t(i)];
  }
  throw std::runtime_error("LdlSolver: refinement failed to reach tolerance");
}

}  // namespace helmpml::sparse
