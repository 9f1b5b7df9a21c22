// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "specpencil/pencil.hpp"
#include "test_util.hpp"

using namespace specpencil;

namespace {

/// Independent oracle for diagonal pencils: eigenvalues of
/// diag(a) x = lambda diag(b) x by plain division, ascending; zero b
/// entries with nonzero a entries count as infinite.
Spectrum diagonal_oracle(const std::vector<double>& a,
                         const std::vector<double>& b) {
  Spectrum s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] == 0.0)
      ++s.infinite_count;
    else
      s.finite.push_back(a[i] / b[i]);
  }
  std::sort(s.finite.begin(), s.finite.end());
  return s;
}

}  // namespace

TEST_CASE("solve_gep on diagonal examples") {
  SUBCASE("definite diagonal pencil") {
    const auto s =
        solve_gep(SymmetricMatrix::diagonal({2, 3}), SymmetricMatrix::identity(2));
    REQUIRE(s.finite.size() == 2);
    CHECK(s.finite[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.finite[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s.infinite_count == 0);
  }

  SUBCASE("singular b goes through the reciprocal pencil") {
    const auto s = solve_gep(SymmetricMatrix::identity(2),
                             SymmetricMatrix::diagonal({1, 0}));
    REQUIRE(s.finite.size() == 1);
    CHECK(s.finite[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.infinite_count == 1);
  }

  SUBCASE("6x6 composed diagonal, frozen from the division oracle") {
    // a = diag(3,4,5,6,0,0) + 0.5*diag(0,0,0,0,1,2) = diag(3,4,5,6,0.5,1)
    SymmetricMatrix a = SymmetricMatrix::diagonal({3, 4, 5, 6, 0, 0});
    a.axpy(0.5, SymmetricMatrix::diagonal({0, 0, 0, 0, 1, 2}));
    const auto s = solve_gep(a, SymmetricMatrix::identity(6));
    const auto expected = diagonal_oracle({3, 4, 5, 6, 0.5, 1},
                                          {1, 1, 1, 1, 1, 1});
    REQUIRE(expected.finite == std::vector<double>{0.5, 1, 3, 4, 5, 6});
    CHECK(test_util::max_abs_diff(s.finite, expected.finite) < 1e-10);
  }
}

TEST_CASE("solve_gep error paths") {
  CHECK_THROWS_AS(solve_gep(SymmetricMatrix::identity(2),
                            SymmetricMatrix::identity(3)),
                  DimensionMismatchError);

  // Shared kernel on e3: both singular, common kernel dimension 1.
  try {
    solve_gep(SymmetricMatrix::diagonal({1, 0, 0}),
              SymmetricMatrix::diagonal({0, 1, 0}));
    FAIL("expected BothSingularError");
  } catch (const BothSingularError& e) {
    CHECK(e.common_kernel_dim == 1);
  }

  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  CHECK_THROWS_AS(SymmetricMatrix::fromDense(m), NotSymmetricError);
}

TEST_CASE("solve_gep with b = I matches a plain eigendecomposition") {
  Pcg32 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(8));
    const SymmetricMatrix a = test_util::random_psd(rng, n);
    const auto s = solve_gep(a, SymmetricMatrix::identity(n));
    // Oracle: Eigen's own self-adjoint solver, an independent path from
    // the LAPACK-backed production code.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.dense());
    REQUIRE(static_cast<int>(s.finite.size()) == n);
    for (int i = 0; i < n; ++i)
      CHECK(s.finite[static_cast<std::size_t>(i)] ==
            doctest::Approx(es.eigenvalues()(i)).epsilon(1e-10));
  }
}

TEST_CASE("solve_gep eigenvector residuals") {
  Pcg32 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const SymmetricMatrix a = test_util::random_psd(rng, n, trial % 3);
    const SymmetricMatrix b = test_util::random_psd(rng, n);  // definite
    const auto s = solve_gep(a, b);
    REQUIRE(s.vectors.has_value());
    const Eigen::MatrixXd ad = a.dense();
    const Eigen::MatrixXd bd = b.dense();
    const double na = ad.norm();
    const double nb = bd.norm();
    for (std::size_t i = 0; i < s.finite.size(); ++i) {
      const Eigen::VectorXd v = s.vectors->col(static_cast<Eigen::Index>(i));
      const double lambda = s.finite[i];
      const double residual = (ad * v - lambda * bd * v).norm();
      CHECK(residual <= 1e-9 * (na + std::abs(lambda) * nb) * v.norm());
    }
  }
}

TEST_CASE("reciprocal-path eigenvalues are reciprocals of the swapped pencil") {
  Pcg32 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(5));
    const SymmetricMatrix a = test_util::random_psd(rng, n);          // PD
    const SymmetricMatrix b = test_util::random_psd(rng, n, 1 + trial % 2);
    const auto direct = solve_gep(a, b);    // reciprocal path (b singular)
    const auto swapped = solve_gep(b, a);   // definite path (a PD)
    std::vector<double> recip;
    for (const double mu : swapped.finite)
      if (mu > 1e-10 * std::max(1.0, swapped.finite.back()))
        recip.push_back(1.0 / mu);
    std::sort(recip.begin(), recip.end());
    REQUIRE(recip.size() == direct.finite.size());
    for (std::size_t i = 0; i < recip.size(); ++i)
      CHECK(direct.finite[i] == doctest::Approx(recip[i]).epsilon(1e-9));
  }
}

TEST_CASE("check_assumption") {
  SUBCASE("kernel-splitting pair") {
    const auto r = check_assumption(SymmetricMatrix::diagonal({3, 4, 5, 6, 0, 0}),
                                    SymmetricMatrix::diagonal({0, 0, 0, 0, 1, 2}));
    CHECK(r.kernel_dim_c1 == 2);
    CHECK(r.c2_pd_on_kernel);
    CHECK(r.c2_vanishes_on_complement);
    CHECK(r.intersection_dim == 0);
  }
  SUBCASE("intersecting kernels") {
    const auto r = check_assumption(SymmetricMatrix::diagonal({1, 0, 0}),
                                    SymmetricMatrix::diagonal({0, 1, 0}));
    CHECK(r.kernel_dim_c1 == 2);
    CHECK_FALSE(r.c2_pd_on_kernel);
    CHECK(r.intersection_dim == 1);
  }
  SUBCASE("trivial kernel") {
    const auto r =
        check_assumption(SymmetricMatrix::identity(3), SymmetricMatrix(3));
    CHECK(r.kernel_dim_c1 == 0);
    CHECK(r.c2_vanishes_on_complement);
    CHECK(r.intersection_dim == 0);
  }
  SUBCASE("rotated basis") {
    // Same structure as the first subcase but conjugated by a rotation,
    // so the kernel is not axis-aligned.
    Eigen::MatrixXd q(2, 2);
    const double c = std::cos(0.7), s = std::sin(0.7);
    q << c, -s, s, c;
    Eigen::MatrixXd c1 = q * Eigen::Vector2d(2.0, 0.0).asDiagonal() * q.transpose();
    Eigen::MatrixXd c2 = q * Eigen::Vector2d(0.0, 3.0).asDiagonal() * q.transpose();
    const auto r = check_assumption(
        SymmetricMatrix::fromDense(0.5 * (c1 + c1.transpose())),
        SymmetricMatrix::fromDense(0.5 * (c2 + c2.transpose())));
    CHECK(r.kernel_dim_c1 == 1);
    CHECK(r.c2_pd_on_kernel);
    CHECK(r.c2_vanishes_on_complement);
  }
}

TEST_CASE("predict_diagonal_spectrum on the model matrices") {
  SUBCASE("disjoint kernels") {
    const ParametricPencil p(SymmetricMatrix::diagonal({0, 0, 3, 4, 5, 6}),
                             SymmetricMatrix::diagonal({1, 2, 0, 0, 0, 0}),
                             SymmetricMatrix::diagonal({7, 8, 9, 10, 0, 0}),
                             SymmetricMatrix::diagonal({0, 0, 0, 0, 0.8, 1}));
    const auto pred = predict_diagonal_spectrum(p);
    REQUIRE(pred.branches.size() == 6);
    CHECK(pred.branches[0].kind == BranchKind::kLinearAlpha);
    CHECK(pred.branches[0].coefficient == doctest::Approx(1.0 / 7));
    CHECK(pred.branches[1].kind == BranchKind::kLinearAlpha);
    CHECK(pred.branches[1].coefficient == doctest::Approx(2.0 / 8));
    CHECK(pred.branches[2].kind == BranchKind::kConstant);
    CHECK(pred.branches[2].coefficient == doctest::Approx(3.0 / 9));
    CHECK(pred.branches[3].kind == BranchKind::kConstant);
    CHECK(pred.branches[3].coefficient == doctest::Approx(4.0 / 10));
    CHECK(pred.branches[4].kind == BranchKind::kHyperbolicBeta);
    CHECK(pred.branches[4].coefficient == doctest::Approx(5.0 / 0.8));
    CHECK(pred.branches[5].kind == BranchKind::kHyperbolicBeta);
    CHECK(pred.branches[5].coefficient == doctest::Approx(6.0 / 1));
  }

  SUBCASE("intersecting kernels") {
    const ParametricPencil p(SymmetricMatrix::diagonal({3, 0, 0, 4, 5, 6}),
                             SymmetricMatrix::diagonal({0, 1, 2, 0, 0, 0}),
                             SymmetricMatrix::diagonal({7, 8, 0, 0, 9, 10}),
                             SymmetricMatrix::diagonal({0, 0, 0.8, 1, 0, 0}));
    const auto pred = predict_diagonal_spectrum(p);
    REQUIRE(pred.branches.size() == 6);
    CHECK(pred.branches[0].kind == BranchKind::kConstant);
    CHECK(pred.branches[0].coefficient == doctest::Approx(3.0 / 7));
    CHECK(pred.branches[1].kind == BranchKind::kLinearAlpha);
    CHECK(pred.branches[1].coefficient == doctest::Approx(1.0 / 8));
    CHECK(pred.branches[2].kind == BranchKind::kRatioAlphaBeta);
    CHECK(pred.branches[2].coefficient == doctest::Approx(2.0 / 0.8));
    CHECK(pred.branches[3].kind == BranchKind::kHyperbolicBeta);
    CHECK(pred.branches[3].coefficient == doctest::Approx(4.0 / 1));
    CHECK(pred.branches[4].kind == BranchKind::kConstant);
    CHECK(pred.branches[4].coefficient == doctest::Approx(5.0 / 9));
    CHECK(pred.branches[5].kind == BranchKind::kConstant);
    CHECK(pred.branches[5].coefficient == doctest::Approx(6.0 / 10));
  }

  SUBCASE("pure splitting against the identity on the scaled side") {
    const ParametricPencil p(SymmetricMatrix::diagonal({3, 4, 5, 6, 0, 0}),
                             SymmetricMatrix::diagonal({0, 0, 0, 0, 1, 2}),
                             SymmetricMatrix(6), SymmetricMatrix::identity(6));
    const auto pred = predict_diagonal_spectrum(p);
    const auto at_beta_one = evaluate_prediction(pred, 1.0, 1.0);
    CHECK(at_beta_one.finite == std::vector<double>{1, 2, 3, 4, 5, 6});
  }

  SUBCASE("error paths") {
    Eigen::MatrixXd off(2, 2);
    off << 1, 0.5, 0.5, 1;
    CHECK_THROWS_AS(
        predict_diagonal_spectrum(ParametricPencil(
            SymmetricMatrix::fromDense(off), SymmetricMatrix(2),
            SymmetricMatrix::identity(2), SymmetricMatrix(2))),
        NotDiagonalError);
    CHECK_THROWS_AS(
        predict_diagonal_spectrum(ParametricPencil(
            SymmetricMatrix::diagonal({1, 0}), SymmetricMatrix::diagonal({0, 0}),
            SymmetricMatrix::diagonal({1, 0}), SymmetricMatrix(2))),
        ZeroRowError);
    CHECK_THROWS_AS(
        predict_diagonal_spectrum(ParametricPencil(
            SymmetricMatrix::diagonal({1, 1}), SymmetricMatrix::diagonal({1, 0}),
            SymmetricMatrix::identity(2), SymmetricMatrix(2))),
        NotDiagonalError);
  }
}

TEST_CASE("evaluate_prediction") {
  const ParametricPencil case2(SymmetricMatrix::identity(6), SymmetricMatrix(6),
                               SymmetricMatrix::diagonal({3, 4, 5, 6, 0, 0}),
                               SymmetricMatrix::diagonal({0, 0, 0, 0, 1, 2}));
  const auto pred = predict_diagonal_spectrum(case2);

  SUBCASE("beta = 2") {
    // Oracle: reciprocals of diag(3,4,5,6,2,4), sorted ascending.
    const auto s = evaluate_prediction(pred, 0.0, 2.0);
    REQUIRE(s.finite.size() == 6);
    std::vector<double> expected{1.0 / 3, 1.0 / 4, 1.0 / 5,
                                 1.0 / 6, 1.0 / 2, 1.0 / 4};
    std::sort(expected.begin(), expected.end());
    CHECK(test_util::max_abs_diff(s.finite, expected) < 1e-12);
    CHECK(s.infinite_count == 0);
  }

  SUBCASE("beta = 0 turns hyperbolas into infinite eigenvalues") {
    const auto s = evaluate_prediction(pred, 0.0, 0.0);
    const std::vector<double> expected{1.0 / 6, 1.0 / 5, 0.25, 1.0 / 3};
    REQUIRE(s.finite.size() == 4);
    CHECK(test_util::max_abs_diff(s.finite, expected) < 1e-12);
    CHECK(s.infinite_count == 2);
  }
}

TEST_CASE("prediction matches the solver on random diagonal pencils") {
  Pcg32 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));
    std::vector<double> a1(static_cast<std::size_t>(n), 0.0), a2 = a1, b1 = a1,
                        b2 = a1;
    for (int i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      (rng.below(2) ? a1[idx] : a2[idx]) = rng.uniform(0.1, 10.0);
      switch (rng.below(3)) {
        case 0: b1[idx] = rng.uniform(0.1, 10.0); break;
        case 1: b2[idx] = rng.uniform(0.1, 10.0); break;
        default: break;  // infinite branch: both b diagonals zero
      }
    }
    const ParametricPencil p(SymmetricMatrix::diagonal(a1),
                             SymmetricMatrix::diagonal(a2),
                             SymmetricMatrix::diagonal(b1),
                             SymmetricMatrix::diagonal(b2));
    const double alpha = rng.uniform(0.05, 10.0);
    const double beta = rng.uniform(0.05, 10.0);
    const auto predicted =
        evaluate_prediction(predict_diagonal_spectrum(p), alpha, beta);
    const auto solved = solve_gep(p.a(alpha), p.b(beta));
    REQUIRE(predicted.finite.size() == solved.finite.size());
    CHECK(predicted.infinite_count == solved.infinite_count);
    for (std::size_t i = 0; i < solved.finite.size(); ++i) {
      const double scale = std::max(1.0, std::abs(predicted.finite[i]));
      CHECK(std::abs(predicted.finite[i] - solved.finite[i]) <=
            1e-10 * scale);
    }
  }
}

TEST_CASE("sweep") {
  const ParametricPencil case1(SymmetricMatrix::diagonal({3, 4, 5, 6, 0, 0}),
                               SymmetricMatrix::diagonal({0, 0, 0, 0, 1, 2}),
                               SymmetricMatrix::identity(6), SymmetricMatrix(6));

  SUBCASE("alpha endpoints of the first model case") {
    const auto r = sweep(case1, {0.0, 1.0}, {0.0});
    const auto& at0 = r.at(0, 0).spectrum.finite;
    CHECK(at0[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at0[1] == doctest::Approx(0.0).epsilon(1e-12));
    const auto& at1 = r.at(1, 0).spectrum.finite;
    CHECK(test_util::max_abs_diff(at1, {1, 2, 3, 4, 5, 6}) < 1e-10);
  }

  SUBCASE("hyperbolic branch halves when beta doubles") {
    const ParametricPencil case2(SymmetricMatrix::identity(6),
                                 SymmetricMatrix(6),
                                 SymmetricMatrix::diagonal({3, 4, 5, 6, 0, 0}),
                                 SymmetricMatrix::diagonal({0, 0, 0, 0, 1, 2}));
    const auto r = sweep(case2, {0.0}, {1.0, 2.0});
    CHECK(r.at(0, 0).spectrum.finite.back() == doctest::Approx(1.0));
    CHECK(r.at(0, 1).spectrum.finite.back() == doctest::Approx(0.5));
  }

  SUBCASE("flat branches are alpha-invariant over two decades") {
    std::vector<double> grid;
    for (double a = 0.1; a <= 10.0 * (1 + 1e-12); a *= 1.5) grid.push_back(a);
    const auto r = sweep(case1, grid, {0.0});
    // Constant branches hold the values 3,4,5,6; collect each across the
    // grid and check max-min spread.
    for (const double target : {3.0, 4.0, 5.0, 6.0}) {
      double lo = 1e300, hi = -1e300;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& fin = r.at(static_cast<int>(g), 0).spectrum.finite;
        double best = fin[0];
        for (const double v : fin)
          if (std::abs(v - target) < std::abs(best - target)) best = v;
        lo = std::min(lo, best);
        hi = std::max(hi, best);
      }
      CHECK(hi - lo <= 1e-9);
    }
  }

  SUBCASE("classification tags of a one-dimensional sweep") {
    // Grid kept below the first crossing (2 * 1.25 < 3), so ascending
    // ranks do not change identity.
    std::vector<double> grid{0.5, 0.75, 1.0, 1.25};
    const auto r = sweep(case1, grid, {0.0});
    REQUIRE(r.curve_fits.size() == 6);
    CHECK(r.curve_fits[0].cls == CurveClass::kLinear);
    CHECK(r.curve_fits[0].coefficient == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.curve_fits[1].cls == CurveClass::kLinear);
    CHECK(r.curve_fits[1].coefficient == doctest::Approx(2.0).epsilon(1e-9));
    for (int i : {2, 3, 4, 5})
      CHECK(r.curve_fits[static_cast<std::size_t>(i)].cls ==
            CurveClass::kConstant);
  }

  SUBCASE("grid point failures are tagged") {
    // Disjoint-kernel model at alpha = beta = 0: neither matrix definite.
    const ParametricPencil p(SymmetricMatrix::diagonal({0, 0, 3, 4, 5, 6}),
                             SymmetricMatrix::diagonal({1, 2, 0, 0, 0, 0}),
                             SymmetricMatrix::diagonal({7, 8, 9, 10, 0, 0}),
                             SymmetricMatrix::diagonal({0, 0, 0, 0, 0.8, 1}));
    try {
      sweep(p, {0.0, 1.0}, {0.0});
      FAIL("expected GridPointError");
    } catch (const GridPointError& e) {
      CHECK(e.alpha_index == 0);
      CHECK(e.beta_index == 0);
    }
    const auto recorded =
        sweep(p, {0.0, 1.0}, {0.0}, kDefaultTol, SweepErrorPolicy::kRecord);
    CHECK_FALSE(recorded.at(0, 0).ok());
    CHECK(recorded.at(1, 0).ok());
  }

  SUBCASE("thread count does not change results") {
    std::vector<double> grid;
    for (int i = 1; i <= 12; ++i) grid.push_back(0.25 * i);
    const auto r1 = sweep(case1, grid, {0.0}, kDefaultTol,
                          SweepErrorPolicy::kThrow, 1);
    const auto r8 = sweep(case1, grid, {0.0}, kDefaultTol,
                          SweepErrorPolicy::kThrow, 8);
    REQUIRE(r1.points.size() == r8.points.size());
    for (std::size_t i = 0; i < r1.points.size(); ++i) {
      REQUIRE(r1.points[i].spectrum.finite.size() ==
              r8.points[i].spectrum.finite.size());
      for (std::size_t j = 0; j < r1.points[i].spectrum.finite.size(); ++j)
        CHECK(r1.points[i].spectrum.finite[j] ==
              r8.points[i].spectrum.finite[j]);
    }
  }
}

TEST_CASE("classify_branch") {
  using P = std::pair<double, double>;
  SUBCASE("constant") {
    const std::vector<P> c{{1, 5}, {2, 5}, {4, 5}, {8, 5}};
    const auto fit = classify_branch(c);
    CHECK(fit.cls == CurveClass::kConstant);
    CHECK(fit.coefficient == doctest::Approx(5.0).epsilon(1e-12));
  }
  SUBCASE("linear") {
    const std::vector<P> c{{1, 2}, {2, 4}, {4, 8}, {8, 16}};
    const auto fit = classify_branch(c);
    CHECK(fit.cls == CurveClass::kLinear);
    CHECK(fit.coefficient == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("hyperbolic") {
    const std::vector<P> c{{1, 0.5}, {2, 0.25}, {4, 0.125}, {8, 0.0625}};
    const auto fit = classify_branch(c);
    CHECK(fit.cls == CurveClass::kHyperbolic);
    CHECK(fit.coefficient == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("mixed slope is unclassified") {
    const std::vector<P> c{{1, 1}, {2, 1.41}, {4, 2.0}, {8, 2.83}};
    CHECK(classify_branch(c).cls == CurveClass::kUnclassified);
  }
  SUBCASE("errors") {
    const std::vector<P> few{{1, 1}, {2, 2}, {4, 4}};
    CHECK_THROWS_AS(classify_branch(few), TooFewPointsError);
    const std::vector<P> neg{{1, 1}, {2, 2}, {4, -4}, {8, 8}};
    CHECK_THROWS_AS(classify_branch(neg), NonPositiveValueError);
  }
}

TEST_CASE("spectrum bookkeeping on the reciprocal path") {
  const auto s = solve_gep(SymmetricMatrix::diagonal({1, 2, 3}),
                           SymmetricMatrix::diagonal({1, 0, 0}));
  CHECK(s.finite.size() + static_cast<std::size_t>(s.infinite_count) == 3);
}
