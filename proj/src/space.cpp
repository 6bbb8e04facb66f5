// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/space.hpp"

#include <cmath>
#include <stdexcept>

#include "helmpml/sparse.hpp"

namespace helmpml::fem {

bool Region::contains(double x, double y) const {
  switch (kind) {
    case Kind::All: return true;
    case Kind::Ball: return std::hypot(x, y) <= r1;
    default: {
      const double r = std::hypot(x, y);
      return r >= r0 && r <= r1;
    }
  }
}

HpSpace::HpSpace(mesh::Mesh mesh, int p)
    : mesh_(std::move(mesh)), p_(p), rule_(quad::triangle_rule(2 * p + 2)) {
  if (p < 1 || p > 12) throw std::invalid_argument("HpSpace: p outside [1, 12]");
  const int nv = mesh_.n_vertices();
  const int ne = mesh_.n_edges();
  const int nb = basis::interior_count(p_);
  n_dofs_ = nv + ne * (p_ - 1) + mesh_.n_cells() * nb;

  dirichlet_.assign(size_t(n_dofs_), false);
  for (int v = 0; v < nv; ++v)
    if (mesh_.vertex_tag[size_t(v)] != mesh::BoundaryTag::None)
      dirichlet_[size_t(v)] = true;
  for (int e = 0; e < ne; ++e)
    if (mesh_.edge_tag[size_t(e)] != mesh::BoundaryTag::None)
      for (int q = 0; q < p_ - 1; ++q)
        dirichlet_[size_t(nv + e * (p_ - 1) + q)] = true;

  interior_index_.assign(size_t(n_dofs_), -1);
  for (int d = 0; d < n_dofs_; ++d)
    if (!dirichlet_[size_t(d)]) {
      interior_index_[size_t(d)] = int(interior_dofs_.size());
      interior_dofs_.push_back(d);
    }
}

void HpSpace::cell_dofs(int cell, std::vector<int>& dofs) const {
  const int nv = mesh_.n_vertices();
  const int ne = mesh_.n_edges();
  const int nb = basis::interior_count(p_);
  dofs.clear();
  dofs.reserve(size_t(local_size()));
  const auto& c = mesh_.cells[size_t(cell)];
  for (int v = 0; v < 3; ++v) dofs.push_back(c.v[size_t(v)]);
  for (int e = 0; e < 3; ++e) {
    const int edge = mesh_.cell_edges[size_t(cell)][size_t(e)].id;
    for (int q = 0; q < p_ - 1; ++q) dofs.push_back(nv + edge * (p_ - 1) + q);
  }
  for (int b = 0; b < nb; ++b)
    dofs.push_back(nv + ne * (p_ - 1) + cell * nb + b);
}

std::array<int, 3> HpSpace::edge_signs(int cell) const {
  std::array<int, 3> s;
  for (int e = 0; e < 3; ++e)
    s[size_t(e)] = mesh_.cell_edges[size_t(cell)][size_t(e)].flip ? -1 : 1;
  return s;
}

const std::vector<basis::ShapeValues>& HpSpace::shape_table(
    std::array<int, 3> signs) const {
  const int key = (signs[0] < 0 ? 1 : 0) | (signs[1] < 0 ? 2 : 0) |
                  (signs[2] < 0 ? 4 : 0);
  if (!table_ready_[size_t(key)]) {
    auto& tab = tables_[size_t(key)];
    tab.resize(size_t(rule_.size()));
    for (int q = 0; q < rule_.size(); ++q)
      basis::shapes(p_, rule_.xi[size_t(q)], rule_.eta[size_t(q)], signs,
                    tab[size_t(q)]);
    table_ready_[size_t(key)] = true;
  }
  return tables_[size_t(key)];
}

std::vector<std::array<double, 2>> HpSpace::dof_coords() const {
  std::vector<std::array<double, 2>> out(static_cast<size_t>(n_dofs_));
  const int nv = mesh_.n_vertices();
  const int ne = mesh_.n_edges();
  for (int v = 0; v < nv; ++v)
    out[size_t(v)] = {mesh_.vertices[size_t(v)].x, mesh_.vertices[size_t(v)].y};
  for (int e = 0; e < ne; ++e) {
    const auto [a, b] = mesh_.edges[size_t(e)];
    const auto& pa = mesh_.vertices[size_t(a)];
    const auto& pb = mesh_.vertices[size_t(b)];
    for (int q = 0; q < p_ - 1; ++q)
      out[size_t(nv + e * (p_ - 1) + q)] = {0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
  }
  const int nb = basis::interior_count(p_);
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    double cx = 0, cy = 0;
    for (int v : mesh_.cells[size_t(c)].v) {
      cx += mesh_.vertices[size_t(v)].x / 3.0;
      cy += mesh_.vertices[size_t(v)].y / 3.0;
    }
    for (int b = 0; b < nb; ++b)
      out[size_t(nv + ne * (p_ - 1) + c * nb + b)] = {cx, cy};
  }
  return out;
}

void HpSpace::evaluate(const std::vector<Complex>& coeffs, double x, double y,
                       Complex& v, Complex& gx, Complex& gy) const {
  v = gx = gy = 0.0;
  double xi, eta;
  const int cell = mesh_.locate({x, y}, xi, eta);
  if (cell < 0) return;
  basis::ShapeValues sv;
  basis::shapes(p_, xi, eta, edge_signs(cell), sv);
  std::vector<int> dofs;
  cell_dofs(cell, dofs);
  const auto mp = mesh_.map_point(cell, xi, eta);
  // J^{-T} columns
  const double inv = 1.0 / mp.detJ;
  const double it00 = mp.J[1][1] * inv, it01 = -mp.J[1][0] * inv;
  const double it10 = -mp.J[0][1] * inv, it11 = mp.J[0][0] * inv;
  for (size_t i = 0; i < dofs.size(); ++i) {
    const Complex c = coeffs[size_t(dofs[i])];
    if (c == Complex(0.0)) continue;
    v += c * sv.value[i];
    const double g0 = sv.grad[i][0], g1 = sv.grad[i][1];
    gx += c * (it00 * g0 + it01 * g1);
    gy += c * (it10 * g0 + it11 * g1);
  }
}

double HpSpace::h1k_norm(const std::vector<Complex>& coeffs, double k,
                         const Region& region) const {
  double acc = 0.0;
  std::vector<int> dofs;
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& tab = shape_table(edge_signs(c));
    cell_dofs(c, dofs);
    for (int q = 0; q < rule_.size(); ++q) {
      const auto mp = mesh_.map_point(c, rule_.xi[size_t(q)], rule_.eta[size_t(q)]);
      if (!region.contains(mp.x.x, mp.x.y)) continue;
      const double inv = 1.0 / mp.detJ;
      const double it00 = mp.J[1][1] * inv, it01 = -mp.J[1][0] * inv;
      const double it10 = -mp.J[0][1] * inv, it11 = mp.J[0][0] * inv;
      Complex v = 0.0, gx = 0.0, gy = 0.0;
      const auto& sv = tab[size_t(q)];
      for (size_t i = 0; i < dofs.size(); ++i) {
        const Complex cf = coeffs[size_t(dofs[i])];
        v += cf * sv.value[i];
        gx += cf * (it00 * sv.grad[i][0] + it01 * sv.grad[i][1]);
        gy += cf * (it10 * sv.grad[i][0] + it11 * sv.grad[i][1]);
      }
      acc += rule_.w[size_t(q)] * mp.detJ *
             (std::norm(gx) + std::norm(gy) + k * k * std::norm(v));
    }
  }
  return std::sqrt(acc);
}

std::vector<Complex> HpSpace::project_h1k(const FieldFn& field, double k,
                                          bool constrained,
                                          double* residual_out) const {
  const int n = constrained ? n_interior() : n_dofs_;
  auto index_of = [&](int dof) {
    return constrained ? interior_index_[size_t(dof)] : dof;
  };
  sparse::TripletBuilder tb(n);
  std::vector<Complex> rhs(static_cast<size_t>(n), 0.0);
  std::vector<int> dofs;
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& tab = shape_table(edge_signs(c));
    cell_dofs(c, dofs);
    const size_t nl = dofs.size();
    std::vector<double> loc(nl * nl, 0.0);
    std::vector<Complex> lrhs(nl, 0.0);
    for (int q = 0; q < rule_.size(); ++q) {
      const auto mp = mesh_.map_point(c, rule_.xi[size_t(q)], rule_.eta[size_t(q)]);
      const double wq = rule_.w[size_t(q)] * mp.detJ;
      const double inv = 1.0 / mp.detJ;
      const double it00 = mp.J[1][1] * inv, it01 = -mp.J[1][0] * inv;
      const double it10 = -mp.J[0][1] * inv, it11 = mp.J[0][0] * inv;
      const auto& sv = tab[size_t(q)];
      Complex fv, fgx, fgy;
      field(mp.x.x, mp.x.y, fv, fgx, fgy);
      std::vector<double> px(nl), py(nl);
      for (size_t i = 0; i < nl; ++i) {
        px[i] = it00 * sv.grad[i][0] + it01 * sv.grad[i][1];
        py[i] = it10 * sv.grad[i][0] + it11 * sv.grad[i][1];
      }
      for (size_t i = 0; i < nl; ++i) {
        lrhs[i] += wq * (fgx * px[i] + fgy * py[i] + k * k * fv * sv.value[i]);
        for (size_t j = 0; j < nl; ++j)
          loc[i * nl + j] +=
              wq * (px[i] * px[j] + py[i] * py[j] + k * k * sv.value[i] * sv.value[j]);
      }
    }
    for (size_t i = 0; i < nl; ++i) {
      const int gi = index_of(dofs[i]);
      if (gi < 0) continue;
      rhs[size_t(gi)] += lrhs[i];
      for (size_t j = 0; j < nl; ++j) {
        const int gj = index_of(dofs[j]);
        if (gj < 0) continue;
        tb.add(gi, gj, loc[i * nl + j]);
      }
    }
  }
  const auto gram = tb.build();
  const auto all_coords = dof_coords();
  std::vector<std::array<double, 2>> coords(static_cast<size_t>(n));
  if (constrained) {
    for (int i = 0; i < n; ++i)
      coords[size_t(i)] = all_coords[size_t(interior_dofs_[size_t(i)])];
  } else {
    coords = all_coords;
  }
  const sparse::LdlSolver ldl(gram, coords);
  std::vector<Complex> sol;
  try {
    sol = ldl.solve_refined(rhs, 1e-10);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("project_h1k: singular Gram matrix (dof-map bug?)");
  }
  if (residual_out) {
    const auto gx = sparse::matvec(gram, sol);
    double rn = 0.0, bn = 0.0;
    for (size_t i = 0; i < sol.size(); ++i) {
      rn += std::norm(rhs[i] - gx[i]);
      bn += std::norm(rhs[i]);
    }
    *residual_out = bn > 0.0 ? std::sqrt(rn / bn) : 0.0;
  }
  std::vector<Complex> full(static_cast<size_t>(n_dofs_), 0.0);
  if (constrained) {
    for (int i = 0; i < n; ++i)
      full[size_t(interior_dofs_[size_t(i)])] = sol[size_t(i)];
  } else {
    full = std::move(sol);
  }
  return full;
}

}  // namespace helmpml::fem
