// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/SparseCore>
#include <iosfwd>

#include "specpencil/mesh.hpp"
#include "specpencil/pencil.hpp"
#include "specpencil/vem.hpp"

namespace specpencil {

/// Global DoF numbering: vertex DoFs in vertex order, then edge moments in
/// edge order (moments innermost), then cell moments in cell order.
/// Dirichlet DoFs (vertex DoFs on boundary vertices, edge moments on
/// boundary edges) are flagged and excluded from the interior numbering.
struct DofMap {
  int k = 1;
  int n_total = 0;
  int n_interior = 0;
  int n_vertices = 0;
  int n_edges = 0;
  int n_cells = 0;
  std::vector<bool> boundary;
  std::vector<int> interior_index;  // n_total -> [0, n_interior) or -1

  int vertexDof(int v) const { return v; }
  int edgeDof(int e, int q) const { return n_vertices + e * (k - 1) + q; }
  int cellDof(int c, int r) const {
    return n_vertices + n_edges * (k - 1) + c * (k * (k - 1) / 2) + r;
  }
};

DofMap build_dof_map(const PolygonalMesh& mesh, int k);

/// The four assembled global matrices over interior DoFs: consistency
/// parts a1, b1 and stabilization parts a2, b2, so the solved pencil is
/// (a1 + alpha a2) x = lambda (b1 + beta b2) x. Stored sparse; densified
/// on demand for the eigensolves.
struct GlobalPencilVEM {
  int n = 0;
  int k = 1;
  StabMode mode = StabMode::kDofIdentity;
  DofMap dof_map;
  Eigen::SparseMatrix<double> a1, a2, b1, b2;

  SymmetricMatrix denseA1() const;
  SymmetricMatrix denseA2() const;
  SymmetricMatrix denseB1() const;
  SymmetricMatrix denseB2() const;
  SymmetricMatrix matrixA(double alpha) const;  // a1 + alpha a2
  SymmetricMatrix matrixB(double beta) const;   // b1 + beta b2

  /// Densifies all four matrices into a pencil with the given parameters.
  ParametricPencil pencil(double alpha = 0.0, double beta = 0.0) const;
};

/// Assembles the local consistency and stabilization matrices over the
/// interior DoFs. Local elements are computed concurrently; the scatter
/// runs in ascending cell order so the result is independent of the
/// thread count.
GlobalPencilVEM assemble(const PolygonalMesh& mesh, int k,
                         StabMode mode = StabMode::kDofIdentity,
                         int max_threads = 0);

/// Number of eigenvalues of a symmetric PSD matrix at or below
/// tol * max(lambda_max, 1).
int kernel_dim(const SymmetricMatrix& c, double tol = kDefaultTol);

/// Smallest finite eigenvalue of the unstabilized pencil (a1, b1),
/// computed by solve_gep on the complement of the common kernel. Throws
/// BothSingularError only when the two matrices share the whole space.
double infsup_probe(const GlobalPencilVEM& g, double tol = kDefaultTol);

/// Coordinate-format text export: one "i j value" triplet per stored
/// entry, 0-based indices, %.17g values, sorted by row then column.
void write_coo(std::ostream& out, const Eigen::SparseMatrix<double>& m);

}  // namespace specpencil
