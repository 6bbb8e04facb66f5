// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace helmpml {

using Complex = std::complex<double>;

/// Small dense d x d matrix (d = 2 or 3), row-major, complex entries.
struct MatD {
  int d = 2;
  std::array<Complex, 9> a{};

  Complex& operator()(int i, int j) { return a[size_t(3 * i + j)]; }
  const Complex& operator()(int i, int j) const { return a[size_t(3 * i + j)]; }

  static MatD identity(int d) {
    MatD m;
    m.d = d;
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }
  static MatD zero(int d) {
    MatD m;
    m.d = d;
    return m;
  }
};

inline MatD operator*(const MatD& x, const MatD& y) {
  MatD z = MatD::zero(x.d);
  for (int i = 0; i < x.d; ++i)
    for (int k = 0; k < x.d; ++k)
      for (int j = 0; j < x.d; ++j) z(i, j) += x(i, k) * y(k, j);
  return z;
}

inline MatD transpose(const MatD& x) {
  MatD z = MatD::zero(x.d);
  for (int i = 0; i < x.d; ++i)
    for (int j = 0; j < x.d; ++j) z(i, j) = x(j, i);
  return z;
}

/// Eigenvalues of the symmetric real part of a complex symmetric d x d matrix.
std::array<double, 3> real_part_eigenvalues(const MatD& m);

/// Largest singular value (spectral norm) of a complex d x d matrix.
double spectral_norm(const MatD& m);

/// Dense complex matrix with partial-pivot LU, used by the collocation
/// solvers and other small dense systems.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Complex& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const Complex& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  std::vector<Complex> solve(std::vector<Complex> b) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Complex> a_;
  friend class LuFactor;
};

/// Partial-pivot LU factorization reusable across right-hand sides.
class LuFactor {
 public:
  explicit LuFactor(const DenseMatrix& a);
  std::vector<Complex> solve(std::vector<Complex> b) const;
  double min_pivot() const { return min_pivot_; }

 private:
  int n_ = 0;
  std::vector<Complex> lu_;
  std::vector<int> perm_;
  double min_pivot_ = 0.0;
};

}  // namespace helmpml
