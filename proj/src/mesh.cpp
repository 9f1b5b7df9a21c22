// SPDX-License-Identifier: Apache-2.0

#include "specpencil/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "specpencil/errors.hpp"
#include "specpencil/rng.hpp"

namespace specpencil {

namespace {

constexpr double kSnapTol = 1e-9;       // vertex deduplication after clipping
constexpr double kSeedTol = 1e-12;      // coincident-seed rejection
constexpr double kBoundaryTol = 1e-9;   // point-on-square-side test
constexpr double kTilingTol = 1e-10;

void format_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

/// Deduplicates nearby points: coordinates are quantized to a kSnapTol
/// grid and the 3x3 neighborhood is probed, so any two points within
/// kSnapTol share one id. The first occurrence fixes the stored
/// coordinates, keeping the result watertight and deterministic.
class VertexSnapper {
public:
  int intern(const Eigen::Vector2d& p) {
    const long long qx = std::llround(p.x() / kSnapTol);
    const long long qy = std::llround(p.y() / kSnapTol);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = map_.find({qx + dx, qy + dy});
        if (it == map_.end()) continue;
        for (const int id : it->second)
          if ((points_[static_cast<std::size_t>(id)] - p).norm() <= kSnapTol)
            return id;
      }
    }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    map_[{qx, qy}].push_back(id);
    return id;
  }

  std::vector<Eigen::Vector2d> take() { return std::move(points_); }

private:
  std::vector<Eigen::Vector2d> points_;
  std::map<std::pair<long long, long long>, std::vector<int>> map_;
};

Polygon unit_square_polygon() {
  return {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
}

/// Voronoi cell of seeds[i], clipped to the unit square. Seeds farther
/// than twice the current cell radius cannot cut and are skipped.
Polygon voronoi_cell(const std::vector<Eigen::Vector2d>& seeds, std::size_t i) {
  Polygon cell = unit_square_polygon();
  const Eigen::Vector2d si = seeds[i];
  double radius = 0.0;
  for (const auto& v : cell) radius = std::max(radius, (v - si).norm());
  for (std::size_t j = 0; j < seeds.size(); ++j) {
    if (j == i) continue;
    const Eigen::Vector2d d = seeds[j] - si;
    const double dist = d.norm();
    if (dist > 2.0 * radius) continue;
    cell = clip_half_plane(cell, si + 0.5 * d, d);
    if (cell.size() < 3)
      throw DegenerateSeedsError("voronoi cell collapsed during clipping");
    radius = 0.0;
    for (const auto& v : cell) radius = std::max(radius, (v - si).norm());
  }
  return cell;
}

bool edge_on_square_boundary(const Eigen::Vector2d& a,
                             const Eigen::Vector2d& b) {
  auto near = [](double u, double v) { return std::abs(u - v) <= kBoundaryTol; };
  return (near(a.x(), 0.0) && near(b.x(), 0.0)) ||
         (near(a.x(), 1.0) && near(b.x(), 1.0)) ||
         (near(a.y(), 0.0) && near(b.y(), 0.0)) ||
         (near(a.y(), 1.0) && near(b.y(), 1.0));
}

}  // namespace

PolygonalMesh PolygonalMesh::fromCells(std::vector<Eigen::Vector2d> vertices,
                                       std::vector<std::vector<int>> cells) {
  PolygonalMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);
  const int nv = mesh.numVertices();

  std::map<std::pair<int, int>, int> edge_ids;
  mesh.cell_edges_.resize(mesh.cells_.size());
  for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
    const auto& loop = mesh.cells_[c];
    if (loop.size() < 3)
      throw MalformedMeshError("cell " + std::to_string(c) +
                               " has fewer than 3 vertices");
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const int u = loop[k];
      const int v = loop[(k + 1) % loop.size()];
      if (u < 0 || u >= nv || v < 0 || v >= nv)
        throw MalformedMeshError("cell " + std::to_string(c) +
                                 " references a vertex out of range");
      if (u == v)
        throw MalformedMeshError("cell " + std::to_string(c) +
                                 " repeats a vertex consecutively");
      const std::pair<int, int> key{std::min(u, v), std::max(u, v)};
      auto [it, inserted] = edge_ids.try_emplace(
          key, static_cast<int>(mesh.edges_.size()));
      if (inserted) {
        MeshEdge e;
        e.lo = key.first;
        e.hi = key.second;
        mesh.edges_.push_back(e);
      }
      MeshEdge& e = mesh.edges_[static_cast<std::size_t>(it->second)];
      int& slot = (u < v) ? e.cell_fwd : e.cell_rev;
      if (slot >= 0)
        throw MalformedMeshError(
            "edge (" + std::to_string(key.first) + "," +
            std::to_string(key.second) +
            ") traversed twice in the same direction");
      slot = static_cast<int>(c);
      mesh.cell_edges_[c].push_back(it->second);
    }
  }

  mesh.boundary_vertex_.assign(static_cast<std::size_t>(nv), false);
  for (const MeshEdge& e : mesh.edges_) {
    if (e.boundary()) {
      mesh.boundary_vertex_[static_cast<std::size_t>(e.lo)] = true;
      mesh.boundary_vertex_[static_cast<std::size_t>(e.hi)] = true;
    }
  }
  return mesh;
}

Polygon PolygonalMesh::cellPolygon(int c) const {
  const auto& loop = cell(c);
  Polygon poly;
  poly.reserve(loop.size());
  for (const int v : loop) poly.push_back(vertex(v));
  return poly;
}

PolygonalMesh voronoi_from_seeds(std::vector<Eigen::Vector2d> seeds,
                                 int lloyd_iters,
                                 std::vector<double>* movement_log) {
  const std::size_t n = seeds.size();
  if (n == 0) throw ConfigError("voronoi: need at least one seed");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((seeds[i] - seeds[j]).norm() < kSeedTol)
        throw DegenerateSeedsError("seeds " + std::to_string(i) + " and " +
                                   std::to_string(j) + " coincide");

  if (movement_log) movement_log->clear();
  for (int iter = 0; iter < lloyd_iters; ++iter) {
    double moved = 0.0;
    std::vector<Eigen::Vector2d> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = polygon_centroid(voronoi_cell(seeds, i));
      moved += (next[i] - seeds[i]).norm();
    }
    seeds = std::move(next);
    if (movement_log) movement_log->push_back(moved);
  }

  VertexSnapper snapper;
  std::vector<std::vector<int>> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Polygon poly = voronoi_cell(seeds, i);
    std::vector<int>& loop = cells[i];
    for (const auto& p : poly) {
      const int id = snapper.intern(p);
      if (loop.empty() || loop.back() != id) loop.push_back(id);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    if (loop.size() < 3)
      throw DegenerateSeedsError("voronoi cell " + std::to_string(i) +
                                 " degenerated under vertex snapping");
  }
  return PolygonalMesh::fromCells(snapper.take(), std::move(cells));
}

PolygonalMesh generate_voronoi(int n_cells, std::uint64_t seed,
                               int lloyd_iters) {
  if (n_cells < 1) throw ConfigError("generate_voronoi: n_cells must be >= 1");
  if (lloyd_iters < 0)
    throw ConfigError("generate_voronoi: lloyd_iters must be >= 0");
  Pcg32 rng(seed);
  std::vector<Eigen::Vector2d> seeds(static_cast<std::size_t>(n_cells));
  for (auto& s : seeds) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    s = {x, y};
  }
  return voronoi_from_seeds(std::move(seeds), lloyd_iters);
}

PolygonalMesh generate_square_grid(int m) {
  if (m < 1) throw ConfigError("generate_square_grid: m must be >= 1");
  std::vector<Eigen::Vector2d> vertices;
  vertices.reserve(static_cast<std::size_t>(m + 1) * (m + 1));
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i)
      vertices.emplace_back(static_cast<double>(i) / m,
                            static_cast<double>(j) / m);
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(m) * m);
  auto id = [m](int i, int j) { return j * (m + 1) + i; };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      cells.push_back(
          {id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return PolygonalMesh::fromCells(std::move(vertices), std::move(cells));
}

RegularityReport validate(const PolygonalMesh& mesh, double gamma) {
  for (int v = 0; v < mesh.numVertices(); ++v) {
    const auto& p = mesh.vertex(v);
    if (p.x() < -kBoundaryTol || p.x() > 1.0 + kBoundaryTol ||
        p.y() < -kBoundaryTol || p.y() > 1.0 + kBoundaryTol)
      throw MalformedMeshError("vertex " + std::to_string(v) +
                               " lies outside the unit square");
  }

  double total_area = 0.0;
  for (int c = 0; c < mesh.numCells(); ++c) {
    const Polygon poly = mesh.cellPolygon(c);
    const double area = polygon_signed_area(poly);
    if (area <= 0.0)
      throw MalformedMeshError("orientation: cell " + std::to_string(c) +
                               " is not counterclockwise");
    if (!polygon_is_simple(poly))
      throw MalformedMeshError("self-intersection in cell " +
                               std::to_string(c));
    total_area += area;
  }
  if (std::abs(total_area - 1.0) > kTilingTol)
    throw MalformedMeshError("tiling: cell areas sum to " +
                             std::to_string(total_area) + " instead of 1");

  for (int e = 0; e < mesh.numEdges(); ++e) {
    const MeshEdge& edge = mesh.edge(e);
    if (edge.boundary() &&
        !edge_on_square_boundary(mesh.vertex(edge.lo), mesh.vertex(edge.hi)))
      throw MalformedMeshError("boundary: edge " + std::to_string(e) +
                               " has one incident cell but is interior");
  }

  if (mesh.numVertices() - mesh.numEdges() + mesh.numCells() != 1)
    throw MalformedMeshError("euler: V - E + F != 1");

  RegularityReport report;
  report.cells.resize(static_cast<std::size_t>(mesh.numCells()));
  report.gamma_observed = std::numeric_limits<double>::infinity();
  for (int c = 0; c < mesh.numCells(); ++c) {
    const Polygon poly = mesh.cellPolygon(c);
    CellMetrics& m = report.cells[static_cast<std::size_t>(c)];
    m.h_p = polygon_diameter(poly);
    m.area = polygon_signed_area(poly);
    m.star_radius = kernel_ball_radius(poly);
    double min_edge = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < poly.size(); ++k)
      min_edge =
          std::min(min_edge, (poly[(k + 1) % poly.size()] - poly[k]).norm());
    m.min_edge_ratio = min_edge / m.h_p;
    report.h = std::max(report.h, m.h_p);
    report.gamma_observed = std::min(
        {report.gamma_observed, m.star_radius / m.h_p, m.min_edge_ratio});
  }
  report.pass = report.gamma_observed >= gamma;
  return report;
}

CellGeometry cell_geometry(const PolygonalMesh& mesh, int cell) {
  const Polygon poly = mesh.cellPolygon(cell);
  CellGeometry g;
  g.h_p = polygon_diameter(poly);
  g.area = polygon_signed_area(poly);
  g.centroid = polygon_centroid(poly);
  return g;
}

std::string to_vempoly(const PolygonalMesh& mesh) {
  std::string out = "vempoly 1\n";
  out += "nv " + std::to_string(mesh.numVertices()) + "\n";
  for (int v = 0; v < mesh.numVertices(); ++v) {
    format_double(out, mesh.vertex(v).x());
    out += ' ';
    format_double(out, mesh.vertex(v).y());
    out += '\n';
  }
  out += "nc " + std::to_string(mesh.numCells()) + "\n";
  for (int c = 0; c < mesh.numCells(); ++c) {
    const auto& loop = mesh.cell(c);
    out += std::to_string(loop.size());
    for (const int v : loop) out += ' ' + std::to_string(v);
    out += '\n';
  }
  return out;
}

namespace {

/// Line-oriented reader that skips '#' comments and blank lines while
/// tracking the physical line number for error reporting.
class VempolyReader {
public:
  explicit VempolyReader(const std::string& text) : in_(text) {}

  std::istringstream nextLine() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return std::istringstream(line);
    }
    throw ParseError(line_no_, "unexpected end of file");
  }

  int lineNumber() const { return line_no_; }

private:
  std::istringstream in_;
  int line_no_ = 0;
};

}  // namespace

PolygonalMesh from_vempoly(const std::string& text) {
  VempolyReader reader(text);

  {
    auto line = reader.nextLine();
    std::string magic;
    int version = 0;
    if (!(line >> magic >> version) || magic != "vempoly" || version != 1)
      throw ParseError(reader.lineNumber(), "expected header 'vempoly 1'");
  }

  int nv = 0;
  {
    auto line = reader.nextLine();
    std::string tag;
    if (!(line >> tag >> nv) || tag != "nv" || nv < 1)
      throw ParseError(reader.lineNumber(), "expected 'nv <count>'");
  }
  std::vector<Eigen::Vector2d> vertices(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    auto line = reader.nextLine();
    double x = 0.0, y = 0.0;
    if (!(line >> x >> y))
      throw ParseError(reader.lineNumber(), "expected '<x> <y>'");
    vertices[static_cast<std::size_t>(v)] = {x, y};
  }

  int nc = 0;
  {
    auto line = reader.nextLine();
    std::string tag;
    if (!(line >> tag >> nc) || tag != "nc" || nc < 1)
      throw ParseError(reader.lineNumber(), "expected 'nc <count>'");
  }
  std::vector<std::vector<int>> cells(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    auto line = reader.nextLine();
    int m = 0;
    if (!(line >> m) || m < 3)
      throw ParseError(reader.lineNumber(), "expected '<m> <i1> ... <im>'");
    auto& loop = cells[static_cast<std::size_t>(c)];
    loop.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      if (!(line >> loop[static_cast<std::size_t>(k)]))
        throw ParseError(reader.lineNumber(), "cell line ends early");
      if (loop[static_cast<std::size_t>(k)] < 0 ||
          loop[static_cast<std::size_t>(k)] >= nv)
        throw ParseError(reader.lineNumber(), "vertex index out of range");
    }
  }
  return PolygonalMesh::fromCells(std::move(vertices), std::move(cells));
}

void save(const PolygonalMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_vempoly(mesh);
  if (!out) throw IoError("failed writing " + path.string());
}

PolygonalMesh load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_vempoly(buf.str());
}

}  // namespace specpencil
