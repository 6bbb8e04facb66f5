// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "helmpml/basis.hpp"
#include "helmpml/linalg.hpp"
#include "helmpml/mesh.hpp"
#include "helmpml/quadrature.hpp"

namespace helmpml::fem {

/// Pointwise value + cartesian gradient of a complex field.
using FieldFn = std::function<void(double x, double y, Complex& v, Complex& gx,
                                   Complex& gy)>;

struct Region {
  enum class Kind { All, Ball, Annulus } kind = Kind::All;
  double r0 = 0.0, r1 = 0.0;
  static Region all() { return {Kind::All, 0.0, 0.0}; }
  static Region ball(double R) { return {Kind::Ball, 0.0, R}; }
  static Region annulus(double r0, double r1) { return {Kind::Annulus, r0, r1}; }
  bool contains(double x, double y) const;
};

/// Degree-p H1-conforming hierarchical space on a curved-triangle mesh,
/// with homogeneous Dirichlet masks on Gamma_tr and Gamma_D.
class HpSpace {
 public:
  HpSpace(mesh::Mesh mesh, int p);

  const mesh::Mesh& mesh() const { return mesh_; }
  int degree() const { return p_; }
  int n_dofs() const { return n_dofs_; }
  int n_interior() const { return int(interior_dofs_.size()); }
  const std::vector<bool>& dirichlet_mask() const { return dirichlet_; }
  const std::vector<int>& interior_dofs() const { return interior_dofs_; }
  /// full dof id -> interior index, or -1 for masked dofs
  const std::vector<int>& interior_index() const { return interior_index_; }

  int local_size() const { return basis::shape_count(p_); }
  void cell_dofs(int cell, std::vector<int>& dofs) const;
  std::array<int, 3> edge_signs(int cell) const;
  const quad::TriRule& rule() const { return rule_; }
  /// reference shape table at the quadrature points for this sign combo
  const std::vector<basis::ShapeValues>& shape_table(std::array<int, 3> signs) const;

  /// representative coordinate per dof (vertex / edge midpoint / centroid)
  std::vector<std::array<double, 2>> dof_coords() const;

  /// evaluate a full-coefficient field at a point (0 outside the mesh)
  void evaluate(const std::vector<Complex>& full_coeffs, double x, double y,
                Complex& v, Complex& gx, Complex& gy) const;

  /// weighted H1_k norm of a full-coefficient field over a region
  double h1k_norm(const std::vector<Complex>& full_coeffs, double k,
                  const Region& region) const;

  /// H1_k-orthogonal projection onto the space (constrained = only interior
  /// dofs, i.e. the H1_0 subspace).  Returns full coefficients; masked dofs
  /// are zero in constrained mode.  The normal-equations relative residual
  /// must reach 1e-10 or the call throws.
  std::vector<Complex> project_h1k(const FieldFn& field, double k,
                                   bool constrained = false,
                                   double* residual_out = nullptr) const;

 private:
  mesh::Mesh mesh_;
  int p_;
  int n_dofs_ = 0;
  std::vector<bool> dirichlet_;
  std::vector<int> interior_dofs_;
  std::vector<int> interior_index_;
  quad::TriRule rule_;
  mutable std::array<std::vector<basis::ShapeValues>, 8> tables_;
  mutable std::array<bool, 8> table_ready_{};
};

}  // namespace helmpml::fem
