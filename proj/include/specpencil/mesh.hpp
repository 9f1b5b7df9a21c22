// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "specpencil/geometry.hpp"

namespace specpencil {

/// Undirected mesh edge between vertex indices lo < hi. cell_fwd traverses
/// lo -> hi in its counterclockwise loop, cell_rev traverses hi -> lo;
/// -1 marks the missing side of a boundary edge.
struct MeshEdge {
  int lo = -1;
  int hi = -1;
  int cell_fwd = -1;
  int cell_rev = -1;
  bool boundary() const { return cell_fwd < 0 || cell_rev < 0; }
};

/// Polygonal tiling of the unit square: vertices, counterclockwise cells,
/// and derived edge connectivity.
class PolygonalMesh {
public:
  /// Builds connectivity from raw vertices and cell loops. Throws
  /// MalformedMeshError for out-of-range indices, cells with fewer than
  /// three vertices, degenerate loop entries, or edges claimed twice in
  /// the same direction.
  static PolygonalMesh fromCells(std::vector<Eigen::Vector2d> vertices,
                                 std::vector<std::vector<int>> cells);

  int numVertices() const { return static_cast<int>(vertices_.size()); }
  int numCells() const { return static_cast<int>(cells_.size()); }
  int numEdges() const { return static_cast<int>(edges_.size()); }

  const Eigen::Vector2d& vertex(int v) const {
    return vertices_[static_cast<std::size_t>(v)];
  }
  const std::vector<int>& cell(int c) const {
    return cells_[static_cast<std::size_t>(c)];
  }
  const MeshEdge& edge(int e) const {
    return edges_[static_cast<std::size_t>(e)];
  }
  /// Edge ids along a cell loop: entry i joins loop vertices i and i+1.
  const std::vector<int>& cellEdges(int c) const {
    return cell_edges_[static_cast<std::size_t>(c)];
  }
  bool vertexOnBoundary(int v) const {
    return boundary_vertex_[static_cast<std::size_t>(v)];
  }

  Polygon cellPolygon(int c) const;

private:
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<MeshEdge> edges_;
  std::vector<std::vector<int>> cell_edges_;
  std::vector<bool> boundary_vertex_;
};

/// Voronoi diagram of n_cells seeds drawn uniformly in the unit square
/// from the documented deterministic generator, clipped by iterated
/// half-plane cuts and relaxed by lloyd_iters centroid updates.
/// Bit-reproducible for fixed arguments. Throws DegenerateSeedsError when
/// two seeds coincide within 1e-12 (the caller reseeds; no automatic
/// perturbation).
PolygonalMesh generate_voronoi(int n_cells, std::uint64_t seed,
                               int lloyd_iters);

/// Same construction from explicit seed points (test hook). When
/// movement_log is given it receives the total absolute seed displacement
/// of each Lloyd iteration.
PolygonalMesh voronoi_from_seeds(std::vector<Eigen::Vector2d> seeds,
                                 int lloyd_iters,
                                 std::vector<double>* movement_log = nullptr);

/// Uniform m x m grid of square cells on the unit square.
PolygonalMesh generate_square_grid(int m);

struct CellMetrics {
  double h_p = 0.0;          // diameter
  double area = 0.0;
  double star_radius = 0.0;  // kernel inscribed-ball radius
  double min_edge_ratio = 0.0;
};

struct RegularityReport {
  double h = 0.0;  // max cell diameter
  std::vector<CellMetrics> cells;
  double gamma_observed = 0.0;
  bool pass = false;
};

/// Structural validation (orientation, simplicity, unit-square tiling,
/// boundary placement, Euler identity V - E + F = 1) followed by the
/// shape-regularity measurements. Throws MalformedMeshError naming the
/// first violated structural invariant; pass is gamma_observed >= gamma.
RegularityReport validate(const PolygonalMesh& mesh, double gamma);

struct CellGeometry {
  double h_p = 0.0;
  double area = 0.0;
  Eigen::Vector2d centroid{0.0, 0.0};
};

CellGeometry cell_geometry(const PolygonalMesh& mesh, int cell);

/// Plain-text "vempoly 1" format, full %.17g precision; load(save(m))
/// reproduces coordinates and connectivity bitwise.
void save(const PolygonalMesh& mesh, const std::filesystem::path& path);
PolygonalMesh load(const std::filesystem::path& path);

std::string to_vempoly(const PolygonalMesh& mesh);
PolygonalMesh from_vempoly(const std::string& text);

}  // namespace specpencil
