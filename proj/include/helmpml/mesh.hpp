// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace helmpml::mesh {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

enum class BoundaryTag { None, GammaTr, GammaD };

/// Curved-triangle mesh of the disk B_{R_tr} or the annulus a < r < R_tr.
/// Boundary edges are curved to the exact circle through a transfinite
/// blending map; interior edges are straight.
class Mesh {
 public:
  struct Cell {
    std::array<int, 3> v;
    int curved_edge = -1;   // local edge index (opposite vertex), or -1
    double arc_radius = 0;  // circle radius for the curved edge
  };
  struct EdgeRef {
    int id = -1;
    bool flip = false;  // local direction disagrees with global (lo -> hi)
  };

  std::vector<Vec2> vertices;
  std::vector<Cell> cells;
  std::vector<std::array<int, 2>> edges;  // global lo < hi vertex pairs
  std::vector<std::array<EdgeRef, 3>> cell_edges;
  std::vector<BoundaryTag> vertex_tag;
  std::vector<BoundaryTag> edge_tag;

  double R_tr = 0.0;
  std::optional<double> obstacle_radius;
  double h_target = 0.0;
  double h_min = 0.0, h_max = 0.0;

  // structured point-location tables
  std::vector<double> band_radii;          // ascending ring radii incl. ends
  std::vector<std::vector<int>> band_cells;  // cells per radial band, by angle

  int n_vertices() const { return int(vertices.size()); }
  int n_cells() const { return int(cells.size()); }
  int n_edges() const { return int(edges.size()); }

  /// Geometry map of a cell at reference coordinates (xi, eta).
  struct MapPoint {
    Vec2 x;
    std::array<std::array<double, 2>, 2> J;  // dx/d(xi,eta)
    double detJ;
  };
  MapPoint map_point(int cell, double xi, double eta) const;

  /// Inverse geometry map; returns false if x is not in the cell.
  bool invert_map(int cell, Vec2 x, double& xi, double& eta, double tol = 1e-9) const;

  /// Structured point location; returns cell index or -1.
  int locate(Vec2 x, double& xi, double& eta) const;

  double cell_diameter(int cell) const;
  double cell_area(int cell, int quad_deg = 14) const;

  /// Plain-text dump (sections: vertices, cells, curved edges, boundary tags).
  std::string dump_text() const;
};

/// Quasi-uniform curved-triangle mesh generator.  Disk meshes use the
/// concentric-ring layout with 6i vertices on ring i; annulus meshes use a
/// polar grid split into triangles.  A ring is always placed at snap_radius
/// (the coefficient break at R1) when it lies inside the domain.
Mesh generate_mesh(double R_tr, double h,
                   std::optional<double> obstacle_radius = std::nullopt,
                   std::optional<double> snap_radius = std::nullopt);

}  // namespace helmpml::mesh
