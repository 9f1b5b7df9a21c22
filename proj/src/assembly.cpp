// SPDX-License-Identifier: Apache-2.0

#include "specpencil/assembly.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <tuple>

#include "specpencil/dense_eig.hpp"
#include "specpencil/parallel.hpp"

namespace specpencil {

namespace {

SymmetricMatrix sparse_to_symmetric(const Eigen::SparseMatrix<double>& m) {
  SymmetricMatrix s(static_cast<int>(m.rows()));
  for (int outer = 0; outer < m.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, outer); it; ++it) {
      if (it.row() <= it.col())
        s.set(static_cast<int>(it.row()), static_cast<int>(it.col()),
              it.value());
    }
  }
  return s;
}

SymmetricMatrix sparse_combo(const Eigen::SparseMatrix<double>& x,
                             double c, const Eigen::SparseMatrix<double>& y) {
  SymmetricMatrix s = sparse_to_symmetric(x);
  if (c != 0.0) {
    for (int outer = 0; outer < y.outerSize(); ++outer) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(y, outer); it; ++it) {
        if (it.row() <= it.col())
          s.add(static_cast<int>(it.row()), static_cast<int>(it.col()),
                c * it.value());
      }
    }
  }
  return s;
}

}  // namespace

DofMap build_dof_map(const PolygonalMesh& mesh, int k) {
  if (k < 1 || k > 3) throw ConfigError("degree k must be 1, 2, or 3");
  DofMap map;
  map.k = k;
  map.n_vertices = mesh.numVertices();
  map.n_edges = mesh.numEdges();
  map.n_cells = mesh.numCells();
  map.n_total = map.n_vertices + map.n_edges * (k - 1) +
                map.n_cells * (k * (k - 1) / 2);
  map.boundary.assign(static_cast<std::size_t>(map.n_total), false);
  for (int v = 0; v < map.n_vertices; ++v)
    if (mesh.vertexOnBoundary(v))
      map.boundary[static_cast<std::size_t>(map.vertexDof(v))] = true;
  for (int e = 0; e < map.n_edges; ++e) {
    if (mesh.edge(e).boundary()) {
      for (int q = 0; q < k - 1; ++q)
        map.boundary[static_cast<std::size_t>(map.edgeDof(e, q))] = true;
    }
  }
  map.interior_index.assign(static_cast<std::size_t>(map.n_total), -1);
  int next = 0;
  for (int d = 0; d < map.n_total; ++d)
    if (!map.boundary[static_cast<std::size_t>(d)])
      map.interior_index[static_cast<std::size_t>(d)] = next++;
  map.n_interior = next;
  return map;
}

GlobalPencilVEM assemble(const PolygonalMesh& mesh, int k, StabMode mode,
                         int max_threads) {
  GlobalPencilVEM g;
  g.k = k;
  g.mode = mode;
  g.dof_map = build_dof_map(mesh, k);
  g.n = g.dof_map.n_interior;

  std::vector<LocalElement> elements(static_cast<std::size_t>(mesh.numCells()));
  std::vector<std::string> failures(static_cast<std::size_t>(mesh.numCells()));
  parallel_for(mesh.numCells(), [&](int c) {
    try {
      Polygon poly = mesh.cellPolygon(c);
      const auto& loop = mesh.cell(c);
      std::vector<bool> reversed(loop.size());
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const MeshEdge& e = mesh.edge(mesh.cellEdges(c)[i]);
        reversed[i] = loop[i] != e.lo;
      }
      elements[static_cast<std::size_t>(c)] = local_matrices(
          ElementGeometry(std::move(poly), std::move(reversed)), k, mode);
      elements[static_cast<std::size_t>(c)].cell = c;
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(c)] = e.what();
    }
  }, max_threads);
  for (int c = 0; c < mesh.numCells(); ++c)
    if (!failures[static_cast<std::size_t>(c)].empty())
      throw Error("cell " + std::to_string(c) + ": " +
                  failures[static_cast<std::size_t>(c)]);

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> ta1, ta2, tb1, tb2;
  for (int c = 0; c < mesh.numCells(); ++c) {
    const LocalElement& el = elements[static_cast<std::size_t>(c)];
    const auto& loop = mesh.cell(c);
    const int np = el.layout.total();
    std::vector<int> global(static_cast<std::size_t>(np), -1);
    for (std::size_t i = 0; i < loop.size(); ++i)
      global[static_cast<std::size_t>(el.layout.vertexDof(
          static_cast<int>(i)))] = g.dof_map.vertexDof(loop[i]);
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int eid = mesh.cellEdges(c)[i];
      for (int q = 0; q <= k - 2; ++q)
        global[static_cast<std::size_t>(
            el.layout.edgeDof(static_cast<int>(i), q))] =
            g.dof_map.edgeDof(eid, q);
    }
    for (int r = 0; r < el.layout.n_internal; ++r)
      global[static_cast<std::size_t>(el.layout.internalDof(r))] =
          g.dof_map.cellDof(c, r);

    for (int li = 0; li < np; ++li) {
      const int gi =
          g.dof_map.interior_index[static_cast<std::size_t>(
              global[static_cast<std::size_t>(li)])];
      if (gi < 0) continue;
      for (int lj = 0; lj < np; ++lj) {
        const int gj =
            g.dof_map.interior_index[static_cast<std::size_t>(
                global[static_cast<std::size_t>(lj)])];
        if (gj < 0) continue;
        ta1.emplace_back(gi, gj, el.a1_local(li, lj));
        ta2.emplace_back(gi, gj, el.stab_a(li, lj));
        tb1.emplace_back(gi, gj, el.b1_local(li, lj));
        tb2.emplace_back(gi, gj, el.stab_b(li, lj));
      }
    }
  }
  g.a1.resize(g.n, g.n);
  g.a2.resize(g.n, g.n);
  g.b1.resize(g.n, g.n);
  g.b2.resize(g.n, g.n);
  g.a1.setFromTriplets(ta1.begin(), ta1.end());
  g.a2.setFromTriplets(ta2.begin(), ta2.end());
  g.b1.setFromTriplets(tb1.begin(), tb1.end());
  g.b2.setFromTriplets(tb2.begin(), tb2.end());
  return g;
}

SymmetricMatrix GlobalPencilVEM::denseA1() const { return sparse_to_symmetric(a1); }
SymmetricMatrix GlobalPencilVEM::denseA2() const { return sparse_to_symmetric(a2); }
SymmetricMatrix GlobalPencilVEM::denseB1() const { return sparse_to_symmetric(b1); }
SymmetricMatrix GlobalPencilVEM::denseB2() const { return sparse_to_symmetric(b2); }

SymmetricMatrix GlobalPencilVEM::matrixA(double alpha) const {
  return sparse_combo(a1, alpha, a2);
}

SymmetricMatrix GlobalPencilVEM::matrixB(double beta) const {
  return sparse_combo(b1, beta, b2);
}

ParametricPencil GlobalPencilVEM::pencil(double alpha, double beta) const {
  return ParametricPencil(denseA1(), denseA2(), denseB1(), denseB2(), alpha,
                          beta);
}

int kernel_dim(const SymmetricMatrix& c, double tol) {
  const auto eig = detail::sym_eig(c.dense(), false);
  const double threshold =
      tol * std::max(eig.values(eig.values.size() - 1), 1.0);
  int count = 0;
  while (count < eig.values.size() && eig.values(count) <= threshold) ++count;
  return count;
}

double infsup_probe(const GlobalPencilVEM& g, double tol) {
  if (g.b1.nonZeros() == 0)
    throw ConfigError("infsup_probe: b1 is identically zero");
  const Eigen::MatrixXd a1d = g.denseA1().dense();
  const Eigen::MatrixXd b1d = g.denseB1().dense();

  const auto eig_sum = detail::sym_eig(a1d + b1d, true);
  const double threshold =
      tol * std::max(eig_sum.values(eig_sum.values.size() - 1), 1.0);
  int k0 = 0;
  while (k0 < eig_sum.values.size() && eig_sum.values(k0) <= threshold) ++k0;
  if (k0 == g.n) throw BothSingularError(k0);

  SymmetricMatrix a_red(g.n - k0), b_red(g.n - k0);
  if (k0 > 0) {
    const Eigen::MatrixXd basis = eig_sum.vectors.rightCols(g.n - k0);
    Eigen::MatrixXd ar = basis.transpose() * a1d * basis;
    Eigen::MatrixXd br = basis.transpose() * b1d * basis;
    ar = 0.5 * (ar + ar.transpose()).eval();
    br = 0.5 * (br + br.transpose()).eval();
    a_red = SymmetricMatrix::fromDense(ar);
    b_red = SymmetricMatrix::fromDense(br);
  } else {
    a_red = g.denseA1();
    b_red = g.denseB1();
  }

  try {
    const Spectrum s = solve_gep(a_red, b_red, tol, /*with_vectors=*/false);
    if (s.finite.empty())
      throw ConfigError("infsup_probe: pencil has no finite eigenvalues");
    return s.finite.front();
  } catch (const BothSingularError&) {
    // Disjoint kernels after deflation: zero is an eigenvalue of the pencil.
    return 0.0;
  }
}

void write_coo(std::ostream& out, const Eigen::SparseMatrix<double>& m) {
  std::vector<std::tuple<int, int, double>> entries;
  entries.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (int outer = 0; outer < m.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, outer); it; ++it)
      entries.emplace_back(static_cast<int>(it.row()),
                           static_cast<int>(it.col()), it.value());
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });
  char buf[64];
  for (const auto& [i, j, v] : entries) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, j, v);
    out << buf;
  }
}

}  // namespace specpencil
