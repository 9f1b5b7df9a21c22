// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "specpencil/quadrature.hpp"
#include "specpencil/vem.hpp"
#include "test_util.hpp"

using namespace specpencil;

namespace {

ElementGeometry unit_square() {
  return ElementGeometry({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

/// Element polygon with random canonical-orientation flags, exercising the
/// odd-edge-moment sign handling.
ElementGeometry random_element(Pcg32& rng) {
  Polygon poly = test_util::random_star_polygon(rng);
  std::vector<bool> reversed(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) reversed[i] = rng.below(2) == 1;
  return ElementGeometry(std::move(poly), std::move(reversed));
}

}  // namespace

TEST_CASE("scaled monomial basis ordering") {
  const ScaledMonomialBasis basis(3, {0.0, 0.0}, 1.0);
  REQUIRE(basis.size() == 10);
  CHECK(basis.exponents[0] == std::pair{0, 0});
  CHECK(basis.exponents[1] == std::pair{1, 0});
  CHECK(basis.exponents[2] == std::pair{0, 1});
  CHECK(basis.exponents[3] == std::pair{2, 0});
  CHECK(basis.exponents[4] == std::pair{1, 1});
  CHECK(basis.exponents[5] == std::pair{0, 2});
  CHECK(basis.exponents[9] == std::pair{0, 3});
  for (int i = 0; i < basis.size(); ++i) {
    const auto [s1, s2] = basis.exponents[static_cast<std::size_t>(i)];
    CHECK(ScaledMonomialBasis::indexOf(s1, s2) == i);
  }
  CHECK(basis.eval(0, {3.0, -2.0}) == 1.0);
}

TEST_CASE("gauss-legendre rules integrate monomials exactly") {
  for (int n = 1; n <= 6; ++n) {
    const GaussRule& rule = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += rule.weights[static_cast<std::size_t>(i)] *
               std::pow(rule.nodes[static_cast<std::size_t>(i)], d);
      const double exact = (d % 2 == 0) ? 2.0 / (d + 1) : 0.0;
      CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("polygon integration") {
  SUBCASE("triangle moment, frozen from the analytic integral") {
    // int_T x dA over (0,0),(1,0),(0,1) = 1/6.
    const auto nodes = triangle_quadrature({0, 0}, {1, 0}, {0, 1}, 2);
    double ix = 0.0, area = 0.0;
    for (const auto& q : nodes) {
      ix += q.w * q.x.x();
      area += q.w;
    }
    CHECK(area == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ix == doctest::Approx(1.0 / 6).epsilon(1e-14));
  }

  SUBCASE("unit square moments") {
    const Polygon square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const ScaledMonomialBasis basis(1, {0.5, 0.5}, std::numbers::sqrt2);
    const auto m = monomial_moments(square, basis);
    CHECK(m(0) == doctest::Approx(1.0).epsilon(1e-14));          // area
    CHECK(m(1) == doctest::Approx(0.0).epsilon(1e-14));          // centered x
    CHECK(m(2) == doctest::Approx(0.0).epsilon(1e-14));          // centered y
  }

  SUBCASE("gram matrix is symmetric positive semidefinite") {
    Pcg32 rng(41);
    const auto poly = test_util::random_star_polygon(rng);
    const ScaledMonomialBasis basis(2, polygon_centroid(poly),
                                    polygon_diameter(poly));
    const Eigen::MatrixXd g = monomial_gram(poly, basis, 4);
    CHECK((g - g.transpose()).norm() == doctest::Approx(0.0));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    CHECK(es.eigenvalues()(0) >= -1e-12 * g.norm());
  }

  SUBCASE("non-star-shaped fan is rejected") {
    const Polygon c_shape{{0, 0}, {4, 0}, {4, 1}, {1, 1},
                          {1, 3}, {4, 3}, {4, 4}, {0, 4}};
    CHECK_THROWS_AS(polygon_quadrature(c_shape, 2), NonStarShapedError);
  }
}

TEST_CASE("energy projector") {
  SUBCASE("reproduces the constant from its DoFs") {
    const auto geom = unit_square();
    const auto pi = projector_nabla(geom, 1);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    const Eigen::VectorXd c = pi * ones;
    CHECK(c(0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c(1) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(c(2) == doctest::Approx(0.0).epsilon(1e-13));
  }

  SUBCASE("vertex hat on the unit square, hand-solved system") {
    // With basis {1, (x-1/2)/h, (y-1/2)/h}, h = sqrt(2), the projection of
    // the hat at (0,0) solves: gradient rows give c1 = c2 = -1/sqrt(2)
    // (from boundary integrals of v * dm/dn), and the boundary-mean row
    // gives c0 = 1/4. Unscaled: 1/4 - (x-1/2)/2 - (y-1/2)/2.
    const auto pi = projector_nabla(unit_square(), 1);
    CHECK(pi(0, 0) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(pi(1, 0) == doctest::Approx(-std::numbers::sqrt2 / 2).epsilon(1e-13));
    CHECK(pi(2, 0) == doctest::Approx(-std::numbers::sqrt2 / 2).epsilon(1e-13));
  }

  SUBCASE("reproduces every scaled monomial on random polygons") {
    Pcg32 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
      const auto geom = random_element(rng);
      for (int k = 1; k <= 3; ++k) {
        const auto el = local_matrices(geom, k);
        const Eigen::MatrixXd should_be_identity = el.pi_nabla * el.dof_matrix;
        const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(
            el.basis.size(), el.basis.size());
        CHECK((should_be_identity - identity).cwiseAbs().maxCoeff() <= 1e-10);
      }
    }
  }

  SUBCASE("idempotent through a DoF resample") {
    Pcg32 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
      const auto geom = random_element(rng);
      for (int k = 1; k <= 3; ++k) {
        const auto el = local_matrices(geom, k);
        Eigen::VectorXd dofs(el.layout.total());
        for (int i = 0; i < dofs.size(); ++i)
          dofs(i) = rng.uniform(-1.0, 1.0);
        const Eigen::VectorXd coeffs = el.pi_nabla * dofs;
        const Eigen::VectorXd resampled = el.dof_matrix * coeffs;
        const Eigen::VectorXd again = el.pi_nabla * resampled;
        CHECK((coeffs - again).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("l2 projector") {
  SUBCASE("coincides with the energy projector for k = 1") {
    Pcg32 rng(44);
    const auto geom = random_element(rng);
    const auto pn = projector_nabla(geom, 1);
    const auto pz = projector_l2(geom, 1);
    CHECK((pn - pz).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("reproduces every scaled monomial on random polygons") {
    Pcg32 rng(45);
    for (int trial = 0; trial < 100; ++trial) {
      const auto geom = random_element(rng);
      for (int k = 1; k <= 3; ++k) {
        const auto el = local_matrices(geom, k);
        const Eigen::MatrixXd should_be_identity = el.pi_zero * el.dof_matrix;
        const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(
            el.basis.size(), el.basis.size());
        CHECK((should_be_identity - identity).cwiseAbs().maxCoeff() <= 1e-10);
      }
    }
  }

  SUBCASE("unit-square bubble with unit cell moment, hand-solved") {
    // k = 2, all boundary DoFs zero, internal moment DoF = 1. Solving the
    // projector systems exactly on the unit square (h^2 = 2) gives
    // Pi-nabla v = Pi-0 v = 2 - 12 m3 - 12 m5, and the P0 moment of the
    // projection equals |P| * 1 = 1.
    const auto el = local_matrices(unit_square(), 2);
    const int bubble = el.layout.internalDof(0);
    Eigen::VectorXd dofs = Eigen::VectorXd::Zero(el.layout.total());
    dofs(bubble) = 1.0;
    const Eigen::VectorXd cz = el.pi_zero * dofs;
    const Eigen::VectorXd cn = el.pi_nabla * dofs;
    const Eigen::VectorXd expected =
        (Eigen::VectorXd(6) << 2, 0, 0, -12, 0, -12).finished();
    CHECK((cz - expected).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((cn - expected).cwiseAbs().maxCoeff() <= 1e-10);
    // P0 moment of the projection: integrate it over the square.
    const Eigen::MatrixXd mass =
        monomial_gram({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, el.basis, 4);
    CHECK((mass * cz)(0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("local matrices") {
  SUBCASE("constants are in the stiffness kernel") {
    Pcg32 rng(46);
    for (int k = 1; k <= 3; ++k) {
      const auto geom = random_element(rng);
      const auto el = local_matrices(geom, k);
      const Eigen::VectorXd ones_dofs =
          el.dof_matrix * Eigen::VectorXd::Unit(el.basis.size(), 0);
      CHECK((el.a1_local * ones_dofs).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  SUBCASE("stabilization forms are scaled identities") {
    const auto el = local_matrices(unit_square(), 2);
    const int np = el.layout.total();
    CHECK((el.sa_local - Eigen::MatrixXd::Identity(np, np)).norm() == 0.0);
    CHECK((el.sb_local - el.h_p * el.h_p * Eigen::MatrixXd::Identity(np, np))
              .norm() == 0.0);
  }

  SUBCASE("mass consistency entry on the unit square, hand value 5/48") {
    // (b1)_00 = int (Pi hat)^2 with Pi hat = 1/4 - (x-1/2)/2 - (y-1/2)/2:
    // 1/16 + (1/4)(1/12 + 1/12) = 5/48.
    const auto el = local_matrices(unit_square(), 1);
    CHECK(el.b1_local(0, 0) == doctest::Approx(5.0 / 48).epsilon(1e-12));
    CHECK(el.b1_local.trace() <= el.area * el.layout.total());
  }

  SUBCASE("consistency matrices are positive semidefinite") {
    Pcg32 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
      const auto geom = random_element(rng);
      for (int k = 1; k <= 3; ++k) {
        const auto el = local_matrices(geom, k);
        for (const auto* m : {&el.a1_local, &el.b1_local}) {
          const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*m);
          CHECK(es.eigenvalues()(0) >= -1e-10 * (1.0 + m->norm()));
        }
      }
    }
  }

  SUBCASE("composed stabilization annihilates polynomial interpolants") {
    Pcg32 rng(48);
    for (int trial = 0; trial < 30; ++trial) {
      const auto geom = random_element(rng);
      for (int k = 1; k <= 3; ++k) {
        const auto el = local_matrices(geom, k);
        for (int j = 0; j < el.basis.size(); ++j) {
          const Eigen::VectorXd dofs = el.dof_matrix.col(j);
          CHECK(std::abs(dofs.dot(el.stab_a * dofs)) <=
                1e-10 * (1.0 + dofs.squaredNorm()));
          CHECK(std::abs(dofs.dot(el.stab_b * dofs)) <=
                1e-10 * (1.0 + dofs.squaredNorm()));
        }
      }
    }
  }

  SUBCASE("DoF count formula") {
    Pcg32 rng(49);
    for (int trial = 0; trial < 20; ++trial) {
      const auto geom = random_element(rng);
      const int nv = static_cast<int>(geom.vertices.size());
      for (int k = 1; k <= 3; ++k) {
        const auto layout = DofLayout::create(k, nv);
        CHECK(layout.total() == nv + nv * (k - 1) + k * (k - 1) / 2);
      }
    }
  }

  SUBCASE("stabilized stiffness spectrum is scale-invariant") {
    // The energy form and the DoF form are both invariant under uniform
    // scaling in 2D, so the extreme nonzero eigenvalues of a1 + sa keep
    // the same ratio when the polygon shrinks.
    Pcg32 rng(50);
    const Polygon base = test_util::random_star_polygon(rng);
    std::vector<double> ratios;
    for (const double scale : {1.0, 0.5, 0.25, 0.125}) {
      Polygon scaled = base;
      for (auto& p : scaled) p *= scale;
      const auto el = local_matrices(ElementGeometry(scaled), 2);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          el.a1_local + el.sa_local);
      ratios.push_back(es.eigenvalues()(es.eigenvalues().size() - 1) /
                       es.eigenvalues()(0));
    }
    for (std::size_t i = 1; i < ratios.size(); ++i)
      CHECK(ratios[i] == doctest::Approx(ratios[0]).epsilon(1e-8));
  }

  SUBCASE("mean-eigenvalue stabilization mode") {
    const auto geom = unit_square();
    const auto el = local_matrices(geom, 2, StabMode::kMeanEigenvalue);
    const int np = el.layout.total();
    const double sigma = el.a1_local.trace() / np;
    const double tau = el.b1_local.trace() / (el.h_p * el.h_p * np);
    CHECK((el.sa_local - sigma * Eigen::MatrixXd::Identity(np, np)).norm() <=
          1e-14 * sigma);
    CHECK((el.sb_local -
           tau * el.h_p * el.h_p * Eigen::MatrixXd::Identity(np, np))
              .norm() <= 1e-12 * tau);
  }
}

TEST_CASE("polynomial DoFs and edge orientation") {
  SUBCASE("vertex DoFs are point values") {
    const auto geom = unit_square();
    const ScaledMonomialBasis basis(2, polygon_centroid(geom.vertices),
                                    polygon_diameter(geom.vertices));
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(6);
    coeffs(1) = 1.5;  // 1.5 * m1
    const Eigen::VectorXd dofs = polynomial_dofs(geom, 2, coeffs);
    for (int v = 0; v < 4; ++v)
      CHECK(dofs(v) == doctest::Approx(
                           1.5 * basis.eval(1, geom.vertices[static_cast<std::size_t>(v)]))
                           .epsilon(1e-13));
  }

  SUBCASE("odd edge moments flip with the canonical direction") {
    Polygon square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const ElementGeometry forward(square);
    const ElementGeometry reversed(square, {true, true, true, true});
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(10);
    coeffs(1) = 1.0;  // first-degree monomial has odd moments along edges
    const Eigen::VectorXd df = polynomial_dofs(forward, 3, coeffs);
    const Eigen::VectorXd dr = polynomial_dofs(reversed, 3, coeffs);
    const auto layout = DofLayout::create(3, 4);
    for (int e = 0; e < 4; ++e) {
      CHECK(df(layout.edgeDof(e, 0)) ==
            doctest::Approx(dr(layout.edgeDof(e, 0))).epsilon(1e-13));
      CHECK(df(layout.edgeDof(e, 1)) ==
            doctest::Approx(-dr(layout.edgeDof(e, 1))).epsilon(1e-13));
    }
  }
}
