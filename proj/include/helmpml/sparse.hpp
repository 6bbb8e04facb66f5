// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "helmpml/linalg.hpp"

namespace helmpml::sparse {

/// Compressed-sparse-column complex matrix.
struct Csc {
  int n = 0;
  std::vector<int> col_ptr;
  std::vector<int> row_idx;
  std::vector<Complex> val;

  size_t nnz() const { return val.size(); }
};

/// Duplicate-summing triplet accumulator.
class TripletBuilder {
 public:
  explicit TripletBuilder(int n) : n_(n) {}
  void add(int row, int col, Complex v) {
    if (v != Complex(0.0)) entries_.push_back({row, col, v});
  }
  Csc build() const;
  int n() const { return n_; }

 private:
  struct Entry {
    int r, c;
    Complex v;
  };
  int n_;
  std::vector<Entry> entries_;
};

std::vector<Complex> matvec(const Csc& a, const std::vector<Complex>& x);
std::vector<Complex> matvec_conj(const Csc& a, const std::vector<Complex>& x);
Csc conjugate(const Csc& a);

/// max |A_ij - A_ji| over the pattern (complex-symmetry check).
double transpose_asymmetry(const Csc& a);
double max_abs(const Csc& a);

/// Sparse LDL^T factorization of a complex symmetric matrix (no
/// conjugation), with a fill-reducing nested-dissection ordering computed
/// from dof coordinates by recursive bisection.
class LdlSolver {
 public:
  /// coords: one (x, y) pair per unknown, used only for the ordering.
  LdlSolver(const Csc& a, const std::vector<std::array<double, 2>>& coords);

  std::vector<Complex> solve(const std::vector<Complex>& b) const;
  /// Solve with iterative refinement against the original matrix until the
  /// relative residual drops below tol; throws if it cannot.
  std::vector<Complex> solve_refined(const std::vector<Complex>& b,
                                     double tol = 1e-10, int max_rounds = 4) const;

  double min_pivot() const { return min_pivot_; }
  size_t factor_nnz() const { return lx_.size(); }

 private:
  int n_ = 0;
  Csc a_;                       // original matrix (for refinement)
  std::vector<int> perm_, iperm_;
  std::vector<int> lp_, li_;
  std::vector<Complex> lx_, d_;
  double min_pivot_ = 0.0;
};

}  // namespace helmpml::sparse
