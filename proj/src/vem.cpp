// SPDX-License-Identifier: Apache-2.0

#include "specpencil/vem.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>

#include "specpencil/errors.hpp"
#include "specpencil/quadrature.hpp"

namespace specpencil {

ScaledMonomialBasis::ScaledMonomialBasis(int k, const Eigen::Vector2d& center_,
                                         double h_)
    : degree(k), center(center_), h(h_) {
  exponents.reserve(static_cast<std::size_t>(dimension(k)));
  for (int d = 0; d <= k; ++d)
    for (int s2 = 0; s2 <= d; ++s2) exponents.emplace_back(d - s2, s2);
}

double ScaledMonomialBasis::eval(int i, const Eigen::Vector2d& x) const {
  const auto [s1, s2] = exponents[static_cast<std::size_t>(i)];
  const double u = (x.x() - center.x()) / h;
  const double v = (x.y() - center.y()) / h;
  return std::pow(u, s1) * std::pow(v, s2);
}

Eigen::Vector2d ScaledMonomialBasis::evalGradient(
    int i, const Eigen::Vector2d& x) const {
  const auto [s1, s2] = exponents[static_cast<std::size_t>(i)];
  const double u = (x.x() - center.x()) / h;
  const double v = (x.y() - center.y()) / h;
  Eigen::Vector2d g{0.0, 0.0};
  if (s1 > 0) g.x() = s1 * std::pow(u, s1 - 1) * std::pow(v, s2) / h;
  if (s2 > 0) g.y() = s2 * std::pow(u, s1) * std::pow(v, s2 - 1) / h;
  return g;
}

std::vector<std::pair<int, double>> ScaledMonomialBasis::laplacian(
    int i) const {
  const auto [s1, s2] = exponents[static_cast<std::size_t>(i)];
  std::vector<std::pair<int, double>> terms;
  if (s1 >= 2)
    terms.emplace_back(indexOf(s1 - 2, s2),
                       static_cast<double>(s1) * (s1 - 1) / (h * h));
  if (s2 >= 2)
    terms.emplace_back(indexOf(s1, s2 - 2),
                       static_cast<double>(s2) * (s2 - 1) / (h * h));
  return terms;
}

Eigen::VectorXd monomial_moments(const Polygon& poly,
                                 const ScaledMonomialBasis& basis) {
  const auto nodes = polygon_quadrature(poly, basis.degree);
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(basis.size());
  for (const auto& node : nodes)
    for (int i = 0; i < basis.size(); ++i)
      moments(i) += node.w * basis.eval(i, node.x);
  return moments;
}

Eigen::MatrixXd monomial_gram(const Polygon& poly,
                              const ScaledMonomialBasis& basis,
                              int degree_needed) {
  if (degree_needed < 2 * basis.degree)
    throw ConfigError("monomial_gram: degree_needed below 2k");
  const ScaledMonomialBasis product_basis(degree_needed, basis.center,
                                          basis.h);
  const Eigen::VectorXd moments = monomial_moments(poly, product_basis);
  Eigen::MatrixXd gram(basis.size(), basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto [a1, a2] = basis.exponents[static_cast<std::size_t>(i)];
    for (int j = i; j < basis.size(); ++j) {
      const auto [b1, b2] = basis.exponents[static_cast<std::size_t>(j)];
      gram(i, j) = gram(j, i) =
          moments(ScaledMonomialBasis::indexOf(a1 + b1, a2 + b2));
    }
  }
  return gram;
}

DofLayout DofLayout::create(int k, int n_vertices) {
  if (k < 1 || k > 3) throw ConfigError("degree k must be 1, 2, or 3");
  DofLayout layout;
  layout.k = k;
  layout.n_vertex = n_vertices;
  layout.n_edge = n_vertices * (k - 1);
  layout.n_internal = k * (k - 1) / 2;
  layout.dofs.reserve(static_cast<std::size_t>(layout.total()));
  for (int v = 0; v < n_vertices; ++v)
    layout.dofs.push_back({DofKind::kVertex, v, 0});
  for (int e = 0; e < n_vertices; ++e)
    for (int q = 0; q <= k - 2; ++q)
      layout.dofs.push_back({DofKind::kEdgeMoment, e, q});
  for (int r = 0; r < layout.n_internal; ++r)
    layout.dofs.push_back({DofKind::kInternalMoment, 0, r});
  return layout;
}

namespace {

/// Dense solve with one step of iterative refinement; the anisotropic
/// monomial Gram systems otherwise lose 2-3 digits on skinny polygons.
template <typename Factorization>
Eigen::MatrixXd solve_refined(const Factorization& factorization,
                              const Eigen::MatrixXd& matrix,
                              const Eigen::MatrixXd& rhs) {
  Eigen::MatrixXd x = factorization.solve(rhs);
  x += factorization.solve(rhs - matrix * x);
  return x;
}

/// Everything shared by the projector and matrix computations for one
/// element: geometry, moments, edge quadrature, and the map from edge-local
/// DoFs to edge polynomial coefficients.
class ElementContext {
public:
  ElementContext(const ElementGeometry& geom, int k)
      : geom_(geom), k_(k), layout_(DofLayout::create(k, numVertices())) {
    if (geom_.vertices.size() < 3)
      throw MalformedMeshError("element polygon needs at least 3 vertices");
    if (geom_.edge_reversed.size() != geom_.vertices.size())
      throw MalformedMeshError("edge orientation flags do not match polygon");
    area_ = polygon_signed_area(geom_.vertices);
    if (area_ <= 0.0)
      throw MalformedMeshError("element polygon must be counterclockwise");
    centroid_ = polygon_centroid(geom_.vertices);
    h_p_ = polygon_diameter(geom_.vertices);
    basis_ = ScaledMonomialBasis(k, centroid_, h_p_);
    moments_ = monomial_moments(
        geom_.vertices, ScaledMonomialBasis(2 * k, centroid_, h_p_));
    buildEdgeData();
  }

  int numVertices() const { return static_cast<int>(geom_.vertices.size()); }
  int nk() const { return basis_.size(); }
  int np() const { return layout_.total(); }
  double area() const { return area_; }
  double hp() const { return h_p_; }
  const Eigen::Vector2d& centroid() const { return centroid_; }
  const ScaledMonomialBasis& basis() const { return basis_; }
  const DofLayout& layout() const { return layout_; }

  double moment(int s1, int s2) const {
    return moments_(ScaledMonomialBasis::indexOf(s1, s2));
  }

  /// Gram of basis pairs from the shared moment table.
  Eigen::MatrixXd massGram() const {
    Eigen::MatrixXd m(nk(), nk());
    for (int i = 0; i < nk(); ++i) {
      const auto [a1, a2] = basis_.exponents[static_cast<std::size_t>(i)];
      for (int j = i; j < nk(); ++j) {
        const auto [b1, b2] = basis_.exponents[static_cast<std::size_t>(j)];
        m(i, j) = m(j, i) = moment(a1 + b1, a2 + b2);
      }
    }
    return m;
  }

  /// Gram of gradient pairs; row and column 0 vanish.
  Eigen::MatrixXd stiffnessGram() const {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nk(), nk());
    const double h2 = h_p_ * h_p_;
    for (int i = 0; i < nk(); ++i) {
      const auto [a1, a2] = basis_.exponents[static_cast<std::size_t>(i)];
      for (int j = i; j < nk(); ++j) {
        const auto [b1, b2] = basis_.exponents[static_cast<std::size_t>(j)];
        double v = 0.0;
        if (a1 > 0 && b1 > 0)
          v += a1 * b1 * moment(a1 + b1 - 2, a2 + b2) / h2;
        if (a2 > 0 && b2 > 0)
          v += a2 * b2 * moment(a1 + b1, a2 + b2 - 2) / h2;
        g(i, j) = g(j, i) = v;
      }
    }
    return g;
  }

  Eigen::MatrixXd projectorNabla() const {
    const int n = nk();
    Eigen::MatrixXd g = stiffnessGram();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, np());
    double perimeter = 0.0;
    for (const EdgeData& e : edges_) perimeter += e.length;

    for (int j = 0; j < n; ++j) g(0, j) = boundaryIntegralMonomial(j) / perimeter;

    for (const EdgeData& e : edges_) {
      for (std::size_t gq = 0; gq < e.nodes.size(); ++gq) {
        const double w = e.length * e.weights[gq];
        // phi values at the node, as a row over all element DoFs
        const Eigen::RowVectorXd phi =
            e.mu_values.row(static_cast<Eigen::Index>(gq)) * e.dof_to_coeff;
        b.row(0) += (w / perimeter) * phi;
        for (int i = 1; i < n; ++i) {
          const double flux = basis_.evalGradient(i, e.nodes[gq]).dot(e.normal);
          b.row(i) += w * flux * phi;
        }
      }
    }
    for (int i = 1; i < n; ++i) {
      for (const auto& [idx, coeff] : basis_.laplacian(i)) {
        // Laplacians live in P_{k-2}; their integrals against v are
        // internal moment DoFs scaled by the area.
        b(i, layout_.internalDof(idx)) -= coeff * area_;
      }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (lu.rank() < n)
      throw SingularConstraintError(
          "projector system is singular (degenerate element)");
    return solve_refined(lu, g, b);
  }

  Eigen::MatrixXd projectorL2(const Eigen::MatrixXd& pi_nabla) const {
    const int n = nk();
    const int n2 = ScaledMonomialBasis::dimension(k_ - 2);
    const Eigen::MatrixXd mass = massGram();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, np());
    for (int r = 0; r < n2; ++r) c(r, layout_.internalDof(r)) = area_;
    for (int i = n2; i < n; ++i) {
      if (n2 > 0) {
        // Split m_i into its P_{k-2} part q and the orthogonal remainder;
        // moments of v against q come from the DoFs, the remainder from
        // the energy projection.
        const Eigen::MatrixXd mass_low = mass.topLeftCorner(n2, n2);
        const Eigen::VectorXd q = solve_refined(
            mass_low.ldlt(), mass_low, mass.col(i).head(n2));
        c.row(i) =
            (mass.row(i) - q.transpose() * mass.topRows(n2)) * pi_nabla;
        for (int r = 0; r < n2; ++r)
          c(i, layout_.internalDof(r)) += area_ * q(r);
      } else {
        c.row(i) = mass.row(i) * pi_nabla;
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(mass);
    if (llt.info() != Eigen::Success)
      throw SingularMassError("polynomial mass matrix is not definite");
    return solve_refined(llt, mass, c);
  }

  /// DoFs of every basis monomial (columns).
  Eigen::MatrixXd dofMatrix() const {
    Eigen::MatrixXd d(np(), nk());
    for (int j = 0; j < nk(); ++j) {
      for (int v = 0; v < numVertices(); ++v)
        d(layout_.vertexDof(v), j) = basis_.eval(j, geom_.vertices[static_cast<std::size_t>(v)]);
      for (int e = 0; e < numVertices(); ++e) {
        const EdgeData& ed = edges_[static_cast<std::size_t>(e)];
        for (int q = 0; q <= k_ - 2; ++q) {
          double acc = 0.0;
          for (std::size_t gq = 0; gq < ed.nodes.size(); ++gq)
            acc += ed.weights[gq] * basis_.eval(j, ed.nodes[gq]) *
                   std::pow(ed.canonical_u[gq], q);
          d(layout_.edgeDof(e, q), j) = acc;
        }
      }
      const auto [s1, s2] = basis_.exponents[static_cast<std::size_t>(j)];
      for (int r = 0; r < layout_.n_internal; ++r) {
        const auto [r1, r2] =
            basis_.exponents[static_cast<std::size_t>(r)];
        d(layout_.internalDof(r), j) = moment(s1 + r1, s2 + r2) / area_;
      }
    }
    return d;
  }

private:
  struct EdgeData {
    double length = 0.0;
    Eigen::Vector2d normal{0.0, 0.0};  // outward
    std::vector<Eigen::Vector2d> nodes;
    std::vector<double> weights;      // normalized: sum = 1
    std::vector<double> canonical_u;  // arc coordinate in [-1/2, 1/2]
    Eigen::MatrixXd mu_values;        // nodes x (k+1): loop-frame monomials
    Eigen::MatrixXd dof_to_coeff;     // (k+1) x N_P: edge polynomial coeffs
  };

  double boundaryIntegralMonomial(int j) const {
    double acc = 0.0;
    for (const EdgeData& e : edges_)
      for (std::size_t gq = 0; gq < e.nodes.size(); ++gq)
        acc += e.length * e.weights[gq] * basis_.eval(j, e.nodes[gq]);
    return acc;
  }

  void buildEdgeData() {
    const int n_gauss = k_ + 1;
    const GaussRule& rule = gauss_legendre(n_gauss);

    // The condition matrix tying edge polynomial coefficients (in the
    // midpoint-scaled loop frame) to endpoint values and loop moments is
    // the same for every edge.
    Eigen::MatrixXd cond(k_ + 1, k_ + 1);
    for (int q = 0; q <= k_; ++q) {
      cond(0, q) = std::pow(-0.5, q);
      cond(1, q) = std::pow(0.5, q);
      for (int r = 0; r <= k_ - 2; ++r) {
        const int p = q + r;
        cond(2 + r, q) = (p % 2 == 0) ? std::pow(0.5, p) / (p + 1) : 0.0;
      }
    }
    const Eigen::MatrixXd cond_inv = cond.inverse();

    edges_.resize(static_cast<std::size_t>(numVertices()));
    for (int e = 0; e < numVertices(); ++e) {
      EdgeData& ed = edges_[static_cast<std::size_t>(e)];
      const Eigen::Vector2d a = geom_.vertices[static_cast<std::size_t>(e)];
      const Eigen::Vector2d b =
          geom_.vertices[(static_cast<std::size_t>(e) + 1) %
                         geom_.vertices.size()];
      const Eigen::Vector2d t = b - a;
      ed.length = t.norm();
      if (ed.length == 0.0)
        throw MalformedMeshError("element polygon has a zero-length edge");
      ed.normal = Eigen::Vector2d(t.y(), -t.x()) / ed.length;
      const bool reversed = geom_.edge_reversed[static_cast<std::size_t>(e)];

      ed.nodes.resize(static_cast<std::size_t>(n_gauss));
      ed.weights.resize(static_cast<std::size_t>(n_gauss));
      ed.canonical_u.resize(static_cast<std::size_t>(n_gauss));
      ed.mu_values.resize(n_gauss, k_ + 1);
      for (int g = 0; g < n_gauss; ++g) {
        const double u = 0.5 * rule.nodes[static_cast<std::size_t>(g)];
        ed.nodes[static_cast<std::size_t>(g)] = a + (u + 0.5) * t;
        ed.weights[static_cast<std::size_t>(g)] =
            0.5 * rule.weights[static_cast<std::size_t>(g)];
        ed.canonical_u[static_cast<std::size_t>(g)] = reversed ? -u : u;
        for (int q = 0; q <= k_; ++q)
          ed.mu_values(g, q) = std::pow(u, q);
      }

      // Right-hand sides as selections of element DoFs; odd canonical
      // moments flip sign in the loop frame on reversed edges.
      Eigen::MatrixXd select = Eigen::MatrixXd::Zero(k_ + 1, np());
      select(0, layout_.vertexDof(e)) = 1.0;
      select(1, layout_.vertexDof((e + 1) % numVertices())) = 1.0;
      for (int r = 0; r <= k_ - 2; ++r)
        select(2 + r, layout_.edgeDof(e, r)) =
            (reversed && (r % 2 == 1)) ? -1.0 : 1.0;
      ed.dof_to_coeff = cond_inv * select;
    }
  }

  const ElementGeometry& geom_;
  int k_;
  DofLayout layout_;
  double area_ = 0.0;
  double h_p_ = 0.0;
  Eigen::Vector2d centroid_{0.0, 0.0};
  ScaledMonomialBasis basis_;
  Eigen::VectorXd moments_;
  std::vector<EdgeData> edges_;
};

}  // namespace

Eigen::MatrixXd projector_nabla(const ElementGeometry& geom, int k) {
  return ElementContext(geom, k).projectorNabla();
}

Eigen::MatrixXd projector_l2(const ElementGeometry& geom, int k) {
  const ElementContext ctx(geom, k);
  return ctx.projectorL2(ctx.projectorNabla());
}

LocalElement local_matrices(const ElementGeometry& geom, int k,
                            StabMode mode) {
  const ElementContext ctx(geom, k);
  LocalElement el;
  el.layout = ctx.layout();
  el.basis = ctx.basis();
  el.h_p = ctx.hp();
  el.area = ctx.area();
  el.centroid = ctx.centroid();

  el.pi_nabla = ctx.projectorNabla();
  el.pi_zero = ctx.projectorL2(el.pi_nabla);
  el.dof_matrix = ctx.dofMatrix();

  const Eigen::MatrixXd gs = ctx.stiffnessGram();
  const Eigen::MatrixXd mass = ctx.massGram();
  el.a1_local = el.pi_nabla.transpose() * gs * el.pi_nabla;
  el.b1_local = el.pi_zero.transpose() * mass * el.pi_zero;
  el.a1_local = 0.5 * (el.a1_local + el.a1_local.transpose()).eval();
  el.b1_local = 0.5 * (el.b1_local + el.b1_local.transpose()).eval();

  const int np = ctx.np();
  double sigma = 1.0, tau = 1.0;
  if (mode == StabMode::kMeanEigenvalue) {
    sigma = el.a1_local.trace() / np;
    tau = el.b1_local.trace() / (el.h_p * el.h_p * np);
  }
  el.sa_local = sigma * Eigen::MatrixXd::Identity(np, np);
  el.sb_local = tau * el.h_p * el.h_p * Eigen::MatrixXd::Identity(np, np);

  const Eigen::MatrixXd ra =
      Eigen::MatrixXd::Identity(np, np) - el.dof_matrix * el.pi_nabla;
  const Eigen::MatrixXd rb =
      Eigen::MatrixXd::Identity(np, np) - el.dof_matrix * el.pi_zero;
  el.stab_a = ra.transpose() * el.sa_local * ra;
  el.stab_b = rb.transpose() * el.sb_local * rb;
  el.stab_a = 0.5 * (el.stab_a + el.stab_a.transpose()).eval();
  el.stab_b = 0.5 * (el.stab_b + el.stab_b.transpose()).eval();
  return el;
}

Eigen::VectorXd polynomial_dofs(const ElementGeometry& geom, int k,
                                const Eigen::VectorXd& coefficients) {
  const ElementContext ctx(geom, k);
  return ctx.dofMatrix() * coefficients;
}

}  // namespace specpencil
