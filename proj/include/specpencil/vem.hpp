// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "specpencil/geometry.hpp"

namespace specpencil {

/// Scaled monomials ((x - center)/h)^s1 ((y - center)/h)^s2 with
/// s1 + s2 <= k, in graded lexicographic order (1, x, y, x^2, xy, y^2, ...).
struct ScaledMonomialBasis {
  int degree = 0;
  Eigen::Vector2d center{0.0, 0.0};
  double h = 1.0;
  std::vector<std::pair<int, int>> exponents;

  ScaledMonomialBasis() = default;
  ScaledMonomialBasis(int k, const Eigen::Vector2d& center_, double h_);

  static int dimension(int k) { return (k + 1) * (k + 2) / 2; }
  static int indexOf(int s1, int s2) {
    const int d = s1 + s2;
    return d * (d + 1) / 2 + s2;
  }

  int size() const { return static_cast<int>(exponents.size()); }
  double eval(int i, const Eigen::Vector2d& x) const;
  Eigen::Vector2d evalGradient(int i, const Eigen::Vector2d& x) const;

  /// Expansion of the Laplacian of monomial i in this same basis
  /// (entries of degree s1 + s2 - 2), as (index, coefficient) pairs.
  std::vector<std::pair<int, double>> laplacian(int i) const;
};

/// Integrals of every monomial of the basis over the polygon, quadrature
/// exact for the requested degree.
Eigen::VectorXd monomial_moments(const Polygon& poly,
                                 const ScaledMonomialBasis& basis);

/// Gram matrix of all basis pairs: (i,j) = integral of m_i m_j over the
/// polygon. Scaled monomials multiply by exponent addition, so the entries
/// come from single-monomial moments of degree up to degree_needed, which
/// must be at least 2 * basis.degree.
Eigen::MatrixXd monomial_gram(const Polygon& poly,
                              const ScaledMonomialBasis& basis,
                              int degree_needed);

enum class DofKind { kVertex, kEdgeMoment, kInternalMoment };

struct DofDescriptor {
  DofKind kind = DofKind::kVertex;
  int entity = 0;  // vertex index, edge index, or cell (0) within element
  int moment = 0;  // moment order for edge/internal kinds
};

/// Element degrees of freedom: vertex values, scaled edge moments up to
/// order k - 2 (edges in loop order, moments innermost), then scaled cell
/// moments up to order k - 2.
struct DofLayout {
  int k = 1;
  int n_vertex = 0;
  int n_edge = 0;
  int n_internal = 0;
  std::vector<DofDescriptor> dofs;

  static DofLayout create(int k, int n_vertices);
  int total() const { return n_vertex + n_edge + n_internal; }
  int vertexDof(int v) const { return v; }
  int edgeDof(int e, int q) const { return n_vertex + e * (k - 1) + q; }
  int internalDof(int r) const { return n_vertex + n_edge + r; }
};

/// Element polygon plus, per edge, whether the canonical edge direction
/// (the one defining odd edge moments) runs against the loop direction.
/// Standalone elements default to loop orientation everywhere.
struct ElementGeometry {
  Polygon vertices;
  std::vector<bool> edge_reversed;

  explicit ElementGeometry(Polygon v)
      : vertices(std::move(v)), edge_reversed(vertices.size(), false) {}
  ElementGeometry(Polygon v, std::vector<bool> reversed)
      : vertices(std::move(v)), edge_reversed(std::move(reversed)) {}
};

enum class StabMode {
  kDofIdentity,     // sigma_P = tau_P = 1
  kMeanEigenvalue,  // sigma_P, tau_P = mean eigenvalue of the consistency part
};

/// All computable per-element data for one polygon and degree k.
struct LocalElement {
  int cell = -1;
  DofLayout layout;
  ScaledMonomialBasis basis;  // degree k, centered at the centroid, h = h_P
  double h_p = 0.0;
  double area = 0.0;
  Eigen::Vector2d centroid{0.0, 0.0};

  Eigen::MatrixXd pi_nabla;    // (dim P_k) x N_P, coefficients from DoFs
  Eigen::MatrixXd pi_zero;     // (dim P_k) x N_P
  Eigen::MatrixXd dof_matrix;  // N_P x (dim P_k), DoFs of each monomial

  Eigen::MatrixXd a1_local;  // energy-projection consistency matrix
  Eigen::MatrixXd b1_local;  // L2-projection consistency matrix
  Eigen::MatrixXd sa_local;  // sigma_P * I
  Eigen::MatrixXd sb_local;  // tau_P * h_P^2 * I
  Eigen::MatrixXd stab_a;    // (I - D Pi_nabla)^T sa (I - D Pi_nabla)
  Eigen::MatrixXd stab_b;    // (I - D Pi_zero)^T sb (I - D Pi_zero)
};

/// Energy projector onto P_k: solves the gradient-orthogonality system
/// with the boundary-mean constraint fixing the constant mode. Edge terms
/// use Gauss rules exact beyond degree 2k - 1; volume terms use the
/// internal moment DoFs. Returns the (dim P_k) x N_P map from DoFs to
/// polynomial coefficients.
Eigen::MatrixXd projector_nabla(const ElementGeometry& geom, int k);

/// L2 projector onto P_k, computable on the enhanced space: moments
/// against P_{k-2} come from the internal DoFs; moments against the
/// L2-orthogonal complement of P_{k-2} in P_k are those of the energy
/// projection.
Eigen::MatrixXd projector_l2(const ElementGeometry& geom, int k);

LocalElement local_matrices(const ElementGeometry& geom, int k,
                            StabMode mode = StabMode::kDofIdentity);

/// DoFs of the polynomial with the given coefficients in the element's
/// scaled monomial basis.
Eigen::VectorXd polynomial_dofs(const ElementGeometry& geom, int k,
                                const Eigen::VectorXd& coefficients);

}  // namespace specpencil
