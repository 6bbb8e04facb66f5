// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#include "helmpml/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "helmpml/quadrature.hpp"

namespace helmpml::mesh {

namespace {

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

// Radii of the ring layers: the interval [r_in, R_tr] subdivided close to h,
// with a layer snapped at snap (if present) so coefficient kinks never cross
// cells.
std::vector<double> layer_radii(double r_in, double R_tr, double h,
                                std::optional<double> snap) {
  std::vector<double> segs{r_in};
  if (snap && *snap > r_in + 1e-12 && *snap < R_tr - 1e-12) segs.push_back(*snap);
  segs.push_back(R_tr);
  std::vector<double> out{r_in};
  for (size_t s = 0; s + 1 < segs.size(); ++s) {
    const double len = segs[s + 1] - segs[s];
    const int n = std::max(1, int(std::lround(len / h)));
    for (int i = 1; i <= n; ++i) out.push_back(segs[s] + len * i / n);
  }
  return out;
}

void finalize(Mesh& m) {
  // edges and per-cell references
  std::map<std::pair<int, int>, int> edge_ids;
  m.cell_edges.resize(m.cells.size());
  for (size_t c = 0; c < m.cells.size(); ++c) {
    const auto& cv = m.cells[c].v;
    const int ev[3][2] = {{cv[1], cv[2]}, {cv[2], cv[0]}, {cv[0], cv[1]}};
    for (int e = 0; e < 3; ++e) {
      const int lo = std::min(ev[e][0], ev[e][1]);
      const int hi = std::max(ev[e][0], ev[e][1]);
      auto [it, inserted] = edge_ids.try_emplace({lo, hi}, int(m.edges.size()));
      if (inserted) m.edges.push_back({lo, hi});
      m.cell_edges[c][size_t(e)] = {it->second, ev[e][0] != lo};
    }
  }
  // boundary tags: edges on the circles
  m.edge_tag.assign(m.edges.size(), BoundaryTag::None);
  m.vertex_tag.assign(m.vertices.size(), BoundaryTag::None);
  auto on_circle = [&](int v, double R) {
    const auto& p = m.vertices[size_t(v)];
    return std::abs(std::hypot(p.x, p.y) - R) < 1e-9 * std::max(1.0, R);
  };
  for (size_t e = 0; e < m.edges.size(); ++e) {
    const auto [a, b] = m.edges[e];
    if (on_circle(a, m.R_tr) && on_circle(b, m.R_tr))
      m.edge_tag[e] = BoundaryTag::GammaTr;
    else if (m.obstacle_radius && on_circle(a, *m.obstacle_radius) &&
             on_circle(b, *m.obstacle_radius))
      m.edge_tag[e] = BoundaryTag::GammaD;
  }
  for (size_t e = 0; e < m.edges.size(); ++e)
    if (m.edge_tag[e] != BoundaryTag::None)
      for (int v : m.edges[e]) m.vertex_tag[size_t(v)] = m.edge_tag[e];

  // orientation, size range, curved-cell sanity
  m.h_min = 1e300;
  m.h_max = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto& cv = m.cells[size_t(c)].v;
    const auto& p0 = m.vertices[size_t(cv[0])];
    const auto& p1 = m.vertices[size_t(cv[1])];
    const auto& p2 = m.vertices[size_t(cv[2])];
    const double det =
        (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    if (det <= 0.0) throw std::runtime_error("generate_mesh: negative cell");
    const double d = m.cell_diameter(c);
    m.h_min = std::min(m.h_min, d);
    m.h_max = std::max(m.h_max, d);
  }
  // geometry-map jacobians at a sample of interior points
  for (int c = 0; c < m.n_cells(); ++c) {
    if (m.cells[size_t(c)].curved_edge < 0) continue;
    for (double xi : {0.05, 0.3, 0.6, 0.9}) {
      for (double eta : {0.05, 0.3, 0.6}) {
        if (xi + eta >= 0.999) continue;
        if (m.map_point(c, xi, eta).detJ <= 0.0)
          throw std::runtime_error("generate_mesh: curved map folds");
      }
    }
  }
  // point-location bands: cells sorted by centroid angle per radial band
  m.band_cells.assign(m.band_radii.size() > 0 ? m.band_radii.size() - 1 : 0, {});
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto& cv = m.cells[size_t(c)].v;
    double rc = 0.0;
    for (int v : cv) {
      const auto& p = m.vertices[size_t(v)];
      rc += std::hypot(p.x, p.y);
    }
    rc /= 3.0;
    const auto it = std::upper_bound(m.band_radii.begin(), m.band_radii.end(), rc);
    int band = int(it - m.band_radii.begin()) - 1;
    band = std::clamp(band, 0, int(m.band_cells.size()) - 1);
    m.band_cells[size_t(band)].push_back(c);
  }
  for (auto& band : m.band_cells) {
    std::sort(band.begin(), band.end(), [&](int a, int b) {
      auto ang = [&](int c) {
        const auto& cv = m.cells[size_t(c)].v;
        double x = 0, y = 0;
        for (int v : cv) {
          x += m.vertices[size_t(v)].x;
          y += m.vertices[size_t(v)].y;
        }
        return std::atan2(y, x);
      };
      return ang(a) < ang(b);
    });
  }
}

}  // namespace

Mesh generate_mesh(double R_tr, double h, std::optional<double> obstacle_radius,
                   std::optional<double> snap_radius) {
  if (!(R_tr > 0.0)) throw std::invalid_argument("generate_mesh: R_tr <= 0");
  if (!(h > 0.0) || h > R_tr / 4.0)
    throw std::invalid_argument("generate_mesh: infeasible meshwidth");
  Mesh m;
  m.R_tr = R_tr;
  m.obstacle_radius = obstacle_radius;
  m.h_target = h;

  if (!obstacle_radius) {
    // Concentric-ring disk layout: ring i carries 6i vertices.
    const auto radii = layer_radii(0.0, R_tr, h, snap_radius);
    const int nring = int(radii.size()) - 1;
    m.band_radii = radii;
    m.vertices.push_back({0.0, 0.0});
    std::vector<std::vector<int>> ring_ids(static_cast<size_t>(nring) + 1);
    ring_ids[0] = {0};
    for (int i = 1; i <= nring; ++i) {
      const int cnt = 6 * i;
      const double R = radii[size_t(i)];
      ring_ids[size_t(i)].reserve(size_t(cnt));
      for (int j = 0; j < cnt; ++j) {
        const double phi = 2.0 * M_PI * j / cnt;
        ring_ids[size_t(i)].push_back(int(m.vertices.size()));
        m.vertices.push_back({R * std::cos(phi), R * std::sin(phi)});
      }
    }
    // hexagonal core
    for (int j = 0; j < 6; ++j)
      m.cells.push_back({{ring_ids[1][size_t(j)], ring_ids[1][size_t((j + 1) % 6)], 0},
                         nring == 1 ? 2 : -1,
                         nring == 1 ? R_tr : 0.0});
    // ring bands
    for (int i = 2; i <= nring; ++i) {
      const auto& in = ring_ids[size_t(i) - 1];
      const auto& out = ring_ids[size_t(i)];
      const int ni = 6 * (i - 1);
      const bool boundary = (i == nring);
      for (int s = 0; s < 6; ++s) {
        for (int j = 0; j < i; ++j) {
          // outer-base triangle
          const int o0 = out[size_t((s * i + j) % (6 * i))];
          const int o1 = out[size_t((s * i + j + 1) % (6 * i))];
          const int ii = in[size_t((s * (i - 1) + j) % ni)];
          m.cells.push_back({{o0, o1, ii}, boundary ? 2 : -1,
                             boundary ? radii[size_t(i)] : 0.0});
          // inner-base triangle
          if (j < i - 1) {
            const int i0 = in[size_t((s * (i - 1) + j) % ni)];
            const int i1 = in[size_t((s * (i - 1) + j + 1) % ni)];
            const int oo = out[size_t((s * i + j + 1) % (6 * i))];
            m.cells.push_back({{i0, oo, i1}, -1, 0.0});
          }
        }
      }
    }
  } else {
    const double a = *obstacle_radius;
    if (!(a > 0.0 && a < R_tr - 2.0 * h))
      throw std::invalid_argument("generate_mesh: bad obstacle radius");
    const auto radii = layer_radii(a, R_tr, h, snap_radius);
    const int nr = int(radii.size()) - 1;
    if (nr < 2) throw std::invalid_argument("generate_mesh: annulus too thin");
    m.band_radii = radii;
    const int na = std::max(8, int(std::lround(M_PI * (a + R_tr) / h)));
    std::vector<std::vector<int>> ring_ids(static_cast<size_t>(nr) + 1);
    for (int i = 0; i <= nr; ++i) {
      for (int j = 0; j < na; ++j) {
        const double phi = 2.0 * M_PI * j / na;
        ring_ids[size_t(i)].push_back(int(m.vertices.size()));
        m.vertices.push_back(
            {radii[size_t(i)] * std::cos(phi), radii[size_t(i)] * std::sin(phi)});
      }
    }
    for (int i = 0; i < nr; ++i) {
      const bool inner_b = (i == 0);
      const bool outer_b = (i == nr - 1);
      for (int j = 0; j < na; ++j) {
        const int j1 = (j + 1) % na;
        const int a0 = ring_ids[size_t(i)][size_t(j)];
        const int a1 = ring_ids[size_t(i)][size_t(j1)];
        const int b0 = ring_ids[size_t(i) + 1][size_t(j)];
        const int b1 = ring_ids[size_t(i) + 1][size_t(j1)];
        // lower-left triangle (a0, b0, a1): inner edge is (a1, a0) = edge 1
        m.cells.push_back({{a0, b0, a1}, inner_b ? 1 : -1, inner_b ? a : 0.0});
        // upper-right triangle (a1, b0, b1): outer edge is (b0, b1) = edge 0
        m.cells.push_back({{a1, b0, b1}, outer_b ? 0 : -1,
                           outer_b ? R_tr : 0.0});
      }
    }
  }
  finalize(m);
  if (m.h_max > 2.0 * h)
    throw std::runtime_error("generate_mesh: mesh size above 2h");
  if (m.h_max / m.h_min > 4.0)
    throw std::runtime_error("generate_mesh: quasi-uniformity ratio above 4");
  return m;
}

Mesh::MapPoint Mesh::map_point(int cell, double xi, double eta) const {
  const auto& c = cells[size_t(cell)];
  const Vec2 p[3] = {vertices[size_t(c.v[0])], vertices[size_t(c.v[1])],
                     vertices[size_t(c.v[2])]};
  const double lam[3] = {1.0 - xi - eta, xi, eta};
  const double dlam[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  MapPoint mp;
  mp.x = {lam[0] * p[0].x + lam[1] * p[1].x + lam[2] * p[2].x,
          lam[0] * p[0].y + lam[1] * p[1].y + lam[2] * p[2].y};
  for (int d = 0; d < 2; ++d) {
    mp.J[0][size_t(d)] =
        dlam[0][d] * p[0].x + dlam[1][d] * p[1].x + dlam[2][d] * p[2].x;
    mp.J[1][size_t(d)] =
        dlam[0][d] * p[0].y + dlam[1][d] * p[1].y + dlam[2][d] * p[2].y;
  }
  if (c.curved_edge >= 0) {
    // Correction lam_a lam_b G(s), s = lam_b - lam_a, with G analytic on
    // [-1, 1]: the arc-minus-chord deviation divided by (1 - s^2).  This
    // removes the opposite-vertex blend singularity, keeping the geometry
    // integrands smooth.
    const int e = c.curved_edge;
    const int ia = (e + 1) % 3, ib = (e + 2) % 3;
    const double u = lam[ia], v = lam[ib];
    const double s = v - u;
    const double R = c.arc_radius;
    const double pa = std::atan2(p[ia].y, p[ia].x);
    const double pb = std::atan2(p[ib].y, p[ib].x);
    const double half = 0.5 * wrap_angle(pb - pa);  // A: half arc angle
    const double pm = pa + half;                    // mid angle
    const double er_x = std::cos(pm), er_y = std::sin(pm);
    const double et_x = -er_y, et_y = er_x;
    const double sinA = std::sin(half), cosA = std::cos(half);
    // f1 = (cos(A s) - cos A)/(1 - s^2) (even), f2 = (sin(A s) - s sin A)/
    // (1 - s^2) (odd); evaluated through half-angle forms with t = 1 - |s|.
    auto f12 = [&](double sv, double& f1, double& f2) {
      const double as = std::abs(sv);
      const double t = 1.0 - as;
      const double den = std::max(t * (2.0 - t), 1e-30);
      const double sat = std::sin(half * t);
      const double sat2 = std::sin(0.5 * half * t);
      f1 = (sinA * sat - 2.0 * cosA * sat2 * sat2) / den;
      const double n2 = t * sinA - cosA * sat - 2.0 * sinA * sat2 * sat2;
      f2 = (sv >= 0.0 ? 1.0 : -1.0) * n2 / den;
    };
    double f1, f2;
    f12(s, f1, f2);
    const double Gx = 4.0 * R * (f1 * er_x + f2 * et_x);
    const double Gy = 4.0 * R * (f1 * er_y + f2 * et_y);
    mp.x.x += u * v * Gx;
    mp.x.y += u * v * Gy;
    // dG/ds by differences of the stable forms (G is analytic and gentle)
    const double hstep = 1e-5;
    double f1p, f2p, f1m, f2m;
    f12(s + hstep, f1p, f2p);
    f12(s - hstep, f1m, f2m);
    const double df1 = (f1p - f1m) / (2.0 * hstep);
    const double df2 = (f2p - f2m) / (2.0 * hstep);
    const double dGx = 4.0 * R * (df1 * er_x + df2 * et_x);
    const double dGy = 4.0 * R * (df1 * er_y + df2 * et_y);
    for (int d = 0; d < 2; ++d) {
      const double duv = dlam[ia][d] * v + u * dlam[ib][d];
      const double ds = dlam[ib][d] - dlam[ia][d];
      mp.J[0][size_t(d)] += duv * Gx + u * v * dGx * ds;
      mp.J[1][size_t(d)] += duv * Gy + u * v * dGy * ds;
    }
  }
  mp.detJ = mp.J[0][0] * mp.J[1][1] - mp.J[0][1] * mp.J[1][0];
  return mp;
}

bool Mesh::invert_map(int cell, Vec2 x, double& xi, double& eta, double tol) const {
  const auto& c = cells[size_t(cell)];
  const Vec2 p0 = vertices[size_t(c.v[0])];
  const Vec2 p1 = vertices[size_t(c.v[1])];
  const Vec2 p2 = vertices[size_t(c.v[2])];
  const double a11 = p1.x - p0.x, a12 = p2.x - p0.x;
  const double a21 = p1.y - p0.y, a22 = p2.y - p0.y;
  const double det = a11 * a22 - a12 * a21;
  xi = ((x.x - p0.x) * a22 - (x.y - p0.y) * a12) / det;
  eta = (-(x.x - p0.x) * a21 + (x.y - p0.y) * a11) / det;
  if (c.curved_edge >= 0) {
    for (int it = 0; it < 25; ++it) {
      const auto mp = map_point(cell, xi, eta);
      const double rx = x.x - mp.x.x, ry = x.y - mp.x.y;
      if (std::abs(rx) + std::abs(ry) < 1e-14 * (1.0 + std::abs(x.x) + std::abs(x.y)))
        break;
      const double d = mp.detJ;
      xi += (rx * mp.J[1][1] - ry * mp.J[0][1]) / d;
      eta += (-rx * mp.J[1][0] + ry * mp.J[0][0]) / d;
      // keep the iterate near the reference cell
      xi = std::clamp(xi, -0.5, 1.5);
      eta = std::clamp(eta, -0.5, 1.5);
    }
    // Newton may wander for points outside the cell; accept only verified
    // preimages.
    const auto mp = map_point(cell, xi, eta);
    if (std::abs(mp.x.x - x.x) + std::abs(mp.x.y - x.y) >
        1e-10 * (1.0 + std::abs(x.x) + std::abs(x.y)))
      return false;
  }
  return xi >= -tol && eta >= -tol && xi + eta <= 1.0 + tol;
}

int Mesh::locate(Vec2 x, double& xi, double& eta) const {
  const double r = std::hypot(x.x, x.y);
  if (r > R_tr * (1.0 + 1e-12)) return -1;
  if (obstacle_radius && r < *obstacle_radius * (1.0 - 1e-12)) return -1;
  int lo_band = 0, hi_band = int(band_cells.size()) - 1;
  {
    const auto it = std::upper_bound(band_radii.begin(), band_radii.end(), r);
    int band = int(it - band_radii.begin()) - 1;
    band = std::clamp(band, 0, int(band_cells.size()) - 1);
    lo_band = std::max(0, band - 1);
    hi_band = std::min(int(band_cells.size()) - 1, band + 1);
  }
  const double phi = std::atan2(x.y, x.x);
  for (int band = lo_band; band <= hi_band; ++band) {
    const auto& cand = band_cells[size_t(band)];
    if (cand.empty()) continue;
    // nearest candidates by centroid angle
    auto ang_of = [&](int c) {
      const auto& cv = cells[size_t(c)].v;
      double cx = 0, cy = 0;
      for (int v : cv) {
        cx += vertices[size_t(v)].x;
        cy += vertices[size_t(v)].y;
      }
      return std::atan2(cy, cx);
    };
    auto it = std::lower_bound(cand.begin(), cand.end(), phi,
                               [&](int c, double val) { return ang_of(c) < val; });
    const int n = int(cand.size());
    const int center = int(it - cand.begin());
    for (int off = -4; off <= 4; ++off) {
      const int c = cand[size_t(((center + off) % n + n) % n)];
      if (invert_map(c, x, xi, eta, 1e-9)) return c;
    }
    for (int c : cand)
      if (invert_map(c, x, xi, eta, 1e-9)) return c;
  }
  for (int c = 0; c < n_cells(); ++c)
    if (invert_map(c, x, xi, eta, 1e-9)) return c;
  return -1;
}

double Mesh::cell_diameter(int cell) const {
  const auto& c = cells[size_t(cell)];
  double d = 0.0;
  for (int e = 0; e < 3; ++e) {
    const auto& pa = vertices[size_t(c.v[size_t(e)])];
    const auto& pb = vertices[size_t(c.v[size_t((e + 1) % 3)])];
    d = std::max(d, std::hypot(pa.x - pb.x, pa.y - pb.y));
  }
  return d;
}

double Mesh::cell_area(int cell, int quad_deg) const {
  const auto rule = quad::triangle_rule(quad_deg);
  double area = 0.0;
  for (int q = 0; q < rule.size(); ++q)
    area += rule.w[size_t(q)] *
            map_point(cell, rule.xi[size_t(q)], rule.eta[size_t(q)]).detJ;
  return area;
}

std::string Mesh::dump_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "$Vertices " << n_vertices() << "\n";
  for (int v = 0; v < n_vertices(); ++v)
    os << v << " " << vertices[size_t(v)].x << " " << vertices[size_t(v)].y << "\n";
  os << "$Cells " << n_cells() << "\n";
  for (int c = 0; c < n_cells(); ++c) {
    const auto& cc = cells[size_t(c)];
    os << c << " " << cc.v[0] << " " << cc.v[1] << " " << cc.v[2] << "\n";
  }
  os << "$CurvedEdges\n";
  for (int c = 0; c < n_cells(); ++c)
    if (cells[size_t(c)].curved_edge >= 0)
      os << c << " " << cells[size_t(c)].curved_edge << " "
         << cells[size_t(c)].arc_radius << "\n";
  os << "$BoundaryTags\n";
  for (int e = 0; e < n_edges(); ++e)
    if (edge_tag[size_t(e)] != BoundaryTag::None)
      os << e << " " << edges[size_t(e)][0] << " " << edges[size_t(e)][1] << " "
         << (edge_tag[size_t(e)] == BoundaryTag::GammaTr ? "Gamma_tr" : "Gamma_D")
         << "\n";
  return os.str();
}

}  // namespace helmpml::mesh
