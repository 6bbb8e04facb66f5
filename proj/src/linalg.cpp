// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/linalg.hpp"

#include <algorithm>

namespace helmpml {

namespace {

// Eigenvalues of a real symmetric 3x3 via the trigonometric closed form.
std::array<double, 3> sym3_eigenvalues(const std::array<double, 9>& s) {
  const double p1 = s[1] * s[1] + s[2] * s[2] + s[5] * s[5];
  const double tr = s[0] + s[4] + s[8];
  if (p1 < 1e-300) {
    std::array<double, 3> ev{s[0], s[4], s[8]};
    std::sort(ev.begin(), ev.end());
    return ev;
  }
  const double q = tr / 3.0;
  const double p2 = (s[0] - q) * (s[0] - q) + (s[4] - q) * (s[4] - q) +
                    (s[8] - q) * (s[8] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  std::array<double, 9> b;
  for (int i = 0; i < 9; ++i) b[size_t(i)] = s[size_t(i)];
  b[0] -= q;
  b[4] -= q;
  b[8] -= q;
  const double detb =
      b[0] * (b[4] * b[8] - b[5] * b[5]) - b[1] * (b[1] * b[8] - b[5] * b[2]) +
      b[2] * (b[1] * b[5] - b[4] * b[2]);
  double r = detb / (2.0 * p * p * p);
  r = std::clamp(r, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  const double e2 = tr - e1 - e3;
  std::array<double, 3> ev{e1, e2, e3};
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

std::array<double, 3> real_part_eigenvalues(const MatD& m) {
  if (m.d == 2) {
    const double a = m(0, 0).real(), b = 0.5 * (m(0, 1).real() + m(1, 0).real());
    const double c = m(1, 1).real();
    const double tr = a + c;
    const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
    return {0.5 * (tr - disc), 0.5 * (tr + disc), 0.0};
  }
  std::array<double, 9> s{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      s[size_t(3 * i + j)] = 0.5 * (m(i, j).real() + m(j, i).real());
  return sym3_eigenvalues(s);
}

double spectral_norm(const MatD& m) {
  // Largest eigenvalue of the Hermitian matrix m^H m.
  if (m.d == 2) {
    // Exact Hermitian 2x2: eigenvalues of [[a, z],[conj(z), c]].
    const double a =
        (std::conj(m(0, 0)) * m(0, 0) + std::conj(m(1, 0)) * m(1, 0)).real();
    const double c =
        (std::conj(m(0, 1)) * m(0, 1) + std::conj(m(1, 1)) * m(1, 1)).real();
    const Complex z = std::conj(m(0, 0)) * m(0, 1) + std::conj(m(1, 0)) * m(1, 1);
    const double tr = a + c;
    const double disc =
        std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * std::norm(z)));
    return std::sqrt(std::max(0.0, 0.5 * (tr + disc)));
  }
  // d = 3: power iteration on m^H m (converges fast; matrix is tiny).
  std::array<Complex, 3> v{1.0, 0.7, 0.3};
  double lam = 0.0;
  for (int it = 0; it < 200; ++it) {
    std::array<Complex, 3> mv{}, w{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mv[size_t(i)] += m(i, j) * v[size_t(j)];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w[size_t(i)] += std::conj(m(j, i)) * mv[size_t(j)];
    double nrm = 0.0;
    for (auto& x : w) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    for (auto& x : w) x /= nrm;
    const double prev = lam;
    lam = nrm;
    v = w;
    if (it > 4 && std::abs(lam - prev) < 1e-14 * lam) break;
  }
  return std::sqrt(lam);
}

LuFactor::LuFactor(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("LuFactor: non-square");
  n_ = a.rows();
  lu_ = a.a_;
  perm_.resize(size_t(n_));
  for (int i = 0; i < n_; ++i) perm_[size_t(i)] = i;
  min_pivot_ = 1e300;
  auto at = [&](int i, int j) -> Complex& { return lu_[size_t(i) * n_ + j]; };
  for (int col = 0; col < n_; ++col) {
    int pr = col;
    double best = std::abs(at(col, col));
    for (int i = col + 1; i < n_; ++i) {
      const double v = std::abs(at(i, col));
      if (v > best) {
        best = v;
        pr = i;
      }
    }
    min_pivot_ = std::min(min_pivot_, best);
    if (best == 0.0) throw std::runtime_error("LuFactor: singular matrix");
    if (pr != col) {
      for (int j = 0; j < n_; ++j) std::swap(at(pr, j), at(col, j));
      std::swap(perm_[size_t(pr)], perm_[size_t(col)]);
    }
    const Complex pivot = at(col, col);
    for (int i = col + 1; i < n_; ++i) {
      const Complex f = at(i, col) / pivot;
      at(i, col) = f;
      if (f != Complex(0.0))
        for (int j = col + 1; j < n_; ++j) at(i, j) -= f * at(col, j);
    }
  }
}

std::vector<Complex> LuFactor::solve(std::vector<Complex> b) const {
  if (int(b.size()) != n_) throw std::invalid_argument("LuFactor::solve: size");
  std::vector<Complex> x(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) x[size_t(i)] = b[size_t(perm_[size_t(i)])];
  auto at = [&](int i, int j) -> const Complex& { return lu_[size_t(i) * n_ + j]; };
  for (int i = 1; i < n_; ++i) {
    Complex s = x[size_t(i)];
    for (int j = 0; j < i; ++j) s -= at(i, j) * x[size_t(j)];
    x[size_t(i)] = s;
  }
  for (int i = n_ - 1; i >= 0; --i) {
    Complex s = x[size_t(i)];
    for (int j = i + 1; j < n_; ++j) s -= at(i, j) * x[size_t(j)];
    x[size_t(i)] = s / at(i, i);
  }
  return x;
}

std::vector<Complex> DenseMatrix::solve(std::vector<Complex> b) const {
  if (rows_ != cols_) throw std::invalid_argument("solve: non-square matrix");
  const int n = rows_;
  if (int(b.size()) != n) throw std::invalid_argument("solve: size mismatch");
  std::vector<Complex> lu = a_;
  auto at = [&](int i, int j) -> Complex& { return lu[size_t(i) * n + j]; };

  for (int col = 0; col < n; ++col) {
    int pr = col;
    double best = std::abs(at(col, col));
    for (int i = col + 1; i < n; ++i) {
      const double v = std::abs(at(i, col));
      if (v > best) {
        best = v;
        pr = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("solve: singular matrix");
    if (pr != col) {
      for (int j = 0; j < n; ++j) std::swap(at(pr, j), at(col, j));
      std::swap(b[size_t(pr)], b[size_t(col)]);
    }
    const Complex pivot = at(col, col);
    for (int i = col + 1; i < n; ++i) {
      const Complex f = at(i, col) / pivot;
      at(i, col) = f;
      if (f != Complex(0.0)) {
        for (int j = col + 1; j < n; ++j) at(i, j) -= f * at(col, j);
        b[size_t(i)] -= f * b[size_t(col)];
      }
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    Complex s = b[size_t(i)];
    for (int j = i + 1; j < n; ++j) s -= at(i, j) * b[size_t(j)];
    b[size_t(i)] = s / at(i, i);
  }
  return b;
}

}  // namespace helmpml
