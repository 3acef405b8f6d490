#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace liftlab;

namespace {

TMPoint polar_point() { return TMPoint{{2.0, 0.0}, {1.0, 3.0}}; }

// N_i^j from the finite-difference Christoffels.
Eigen::MatrixXd oracle_n(const ManifoldSpec& spec, const TMPoint& p) {
  const int n = spec.dim();
  const auto G = oracle::christoffel(spec, p.x);
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) N(i, j) += p.y[a] * G[j][a][i];
  return N;
}

// det and inertia of the block matrix, straight from Eigen.
Eigen::MatrixXd oracle_blocks(const Eigen::MatrixXd& g, const LiftMetricCoeffs& c) {
  const int n = static_cast<int>(g.rows());
  Eigen::MatrixXd A(2 * n, 2 * n);
  A << c.a * g, c.b * g, c.b * g, c.c * g;
  return A;
}

}  // namespace

TEST_SUITE("tangent_bundle") {
  TEST_CASE("nonlinear connection examples") {
    const TMPoint any{{0.4, -0.2}, {1.5, 2.5}};
    CHECK(max_abs(nonlinear_connection(catalog_manifold("euclidean2"), any)) == 0.0);

    const MatrixD N = nonlinear_connection(catalog_manifold("polar2"), polar_point());
    // N(i, j) = N_i^j with index 0 = r, 1 = theta
    CHECK(N(1, 0) == doctest::Approx(-6.0));
    CHECK(N(0, 1) == doctest::Approx(1.5));
    CHECK(N(1, 1) == doctest::Approx(0.5));
    CHECK(N(0, 0) == doctest::Approx(0.0));
    const Eigen::MatrixXd fd = oracle_n(catalog_manifold("polar2"), polar_point());
    CHECK(oracle::max_abs_diff(oracle::to_eigen(N), fd) <= 1e-8);
  }

  TEST_CASE("nonlinear connection is linear in y") {
    std::mt19937_64 rng(31);
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      for (int s = 0; s < 20; ++s) {
        TMPoint p = oracle::random_tm_point(spec, rng);
        const MatrixD n1 = nonlinear_connection(spec, p);
        for (double& v : p.y) v *= 2.0;
        const MatrixD n2 = nonlinear_connection(spec, p);
        CHECK(max_abs(n2 - 2.0 * n1) <= 1e-12 * std::max(1.0, max_abs(n2)));
        CHECK(oracle::max_abs_diff(oracle::to_eigen(n2), oracle_n(spec, p)) <= 1e-6);
      }
    }
  }

  TEST_CASE("chart transformation of N") {
    const ManifoldSpec e2 = catalog_manifold("euclidean2");
    const ManifoldSpec polar = catalog_manifold("polar2");
    SUBCASE("identity chart map") {
      const std::vector<Expr> id = {parse("x1", 2), parse("x2", 2)};
      const TMPoint p = polar_point();
      const MatrixD t = chart_transform_n(polar, polar, id, p);
      CHECK(max_abs(t - nonlinear_connection(polar, p)) <= 1e-12);
    }
    SUBCASE("cartesian to polar at 50 samples") {
      const std::vector<Expr> map = {parse("x1*cos(x2)", 2), parse("x1*sin(x2)", 2)};
      std::mt19937_64 rng(37);
      double worst = 0.0;
      for (int s = 0; s < 50; ++s) {
        const TMPoint p = oracle::random_tm_point(polar, rng);
        const MatrixD t = chart_transform_n(e2, polar, map, p);
        worst = std::max(worst, max_abs(t - nonlinear_connection(polar, p)));
      }
      CHECK(worst <= 1e-8);
    }
    SUBCASE("linear chart maps conjugate N") {
      const ManifoldSpec sphere = catalog_manifold("sphere2");
      // source coordinates as functions of target: x = M u with M = [[1, 0], [0, 2]]
      const ManifoldSpec scaled = ManifoldSpec::from_text("scaled", {{"1", "0"}, {"0", "4*sin(x1)^2"}},
                                                         DomainBox{{0.2, -1.0}, {2.9, 1.0}});
      const std::vector<Expr> map = {parse("x1", 2), parse("2*x2", 2)};
      const TMPoint p{{1.0, 0.2}, {0.3, -0.7}};
      const TMPoint src{{1.0, 0.4}, {0.3, -1.4}};
      const MatrixD ns = nonlinear_connection(sphere, src);
      const MatrixD t = chart_transform_n(sphere, scaled, map, p);
      // N'_i'^h' = (dx'/dx)^h'_h (dx/dx')^i_i' N_i^h with dx/dx' = diag(1, 2)
      const double jac[] = {1.0, 2.0};
      for (int i = 0; i < 2; ++i)
        for (int h = 0; h < 2; ++h) CHECK(t(i, h) == doctest::Approx(jac[i] * ns(i, h) / jac[h]).epsilon(1e-12));
      CHECK(max_abs(t - nonlinear_connection(scaled, p)) <= 1e-10);
    }
    SUBCASE("singular chart map") {
      const std::vector<Expr> map = {parse("x1", 2), parse("x1", 2)};
      CHECK_THROWS_AS(chart_transform_n(e2, e2, map, TMPoint{{0.3, 0.1}, {1, 1}}), GeometryError);
    }
  }

  TEST_CASE("adapted frame") {
    const AdaptedFrame ef = adapted_frame(catalog_manifold("euclidean2"), TMPoint{{0.1, 0.2}, {0.3, 0.4}});
    CHECK(max_abs(ef.frame - MatrixD::identity(4)) == 0.0);

    const AdaptedFrame pf = adapted_frame(catalog_manifold("polar2"), polar_point());
    // X_theta = d/dx_theta + 6 d/dy_r - 0.5 d/dy_theta
    CHECK(pf.frame(1, 0) == 0.0);
    CHECK(pf.frame(1, 1) == 1.0);
    CHECK(pf.frame(1, 2) == doctest::Approx(6.0));
    CHECK(pf.frame(1, 3) == doctest::Approx(-0.5));

    std::mt19937_64 rng(41);
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      const int n = spec.dim();
      for (int s = 0; s < 10; ++s) {
        const TMPoint p = oracle::random_tm_point(spec, rng);
        const AdaptedFrame f = adapted_frame(spec, p);
        CHECK(max_abs(f.frame * f.coframe.transpose() - MatrixD::identity(2 * n)) <= 1e-12);
        // delta y^h = dy^h + N_i^h dx^i rebuilt from the oracle N
        const Eigen::MatrixXd N = oracle_n(spec, p);
        for (int h = 0; h < n; ++h)
          for (int i = 0; i < n; ++i) {
            CHECK(std::abs(f.coframe(n + h, i) - N(i, h)) <= 1e-7);
            CHECK(f.coframe(n + h, n + i) == (h == i ? 1.0 : 0.0));
          }
      }
    }
  }

  TEST_CASE("lift metric examples") {
    const LiftMetricValue e = lift_metric(catalog_manifold("euclidean2"), {1, 0, 1}, TMPoint{{0.5, 0.5}, {1, -1}});
    CHECK(max_abs(e.coordinate_matrix - MatrixD::identity(4)) == 0.0);
    CHECK(e.signature_report() == "riemannian (4, 0)");

    const ManifoldSpec polar = catalog_manifold("polar2");
    const LiftMetricValue p = lift_metric(polar, {2, 1, 1}, polar_point());
    const Eigen::MatrixXd blocks = oracle_blocks(oracle::metric(polar, {2.0, 0.0}), {2, 1, 1});
    CHECK(blocks.determinant() == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(determinant(p.adapted_blocks) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(determinant(p.coordinate_matrix) == doctest::Approx(16.0).epsilon(1e-12));

    const LiftMetricValue g2 = lift_metric(polar, {0, 1, 0}, polar_point());
    CHECK(g2.signature_report() == "pseudo-riemannian (2, 2)");
  }

  TEST_CASE("signature classification") {
    CHECK(signature_classify({1, 0, 1}) == Signature::riemannian);
    CHECK(signature_classify({0, 1, 0}) == Signature::pseudo);
    CHECK(signature_classify({1, 1, 2}) == Signature::riemannian);
    CHECK(signature_classify({1, 1, 1}) == Signature::singular);
    CHECK(signature_classify({-1, 0, -1}) == Signature::pseudo);
    CHECK_THROWS_WITH_AS(require_nonsingular({1, 1, 1}), doctest::Contains("singular coefficients"), ConfigError);
    CHECK_NOTHROW(require_nonsingular({0, 1, 0}));

    // eigenvalue counts agree with the classification
    std::mt19937_64 rng(43);
    const ManifoldSpec sphere = catalog_manifold("sphere2");
    for (LiftMetricCoeffs c : {LiftMetricCoeffs{1, 0, 1}, LiftMetricCoeffs{0, 1, 0}, LiftMetricCoeffs{1, 1, 2}}) {
      for (int s = 0; s < 10; ++s) {
        const TMPoint p = oracle::random_tm_point(sphere, rng);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle_blocks(oracle::metric(sphere, p.x), c));
        int pos = 0, neg = 0;
        for (int k = 0; k < 4; ++k) (es.eigenvalues()(k) > 0 ? pos : neg)++;
        const LiftMetricValue v = lift_metric(sphere, c, p);
        CHECK(v.inertia.positive == pos);
        CHECK(v.inertia.negative == neg);
        CHECK((signature_classify(c) == Signature::riemannian) == (neg == 0));
      }
    }
  }

  TEST_CASE("determinant identity and congruence at 100 points") {
    std::mt19937_64 rng(47);
    const std::vector<LiftMetricCoeffs> coeffs = {{1, 0, 1}, {1, 0.5, 1}, {2, 1, 3}, {0, 1, 0}};
    const auto names = catalog_manifold_names();
    int count = 0;
    for (int s = 0; s < 100; ++s) {
      const ManifoldSpec spec = catalog_manifold(names[s % names.size()]);
      const int n = spec.dim();
      const LiftMetricCoeffs c = coeffs[s % coeffs.size()];
      const TMPoint p = oracle::random_tm_point(spec, rng);
      const LiftMetricValue v = lift_metric(spec, c, p);
      const double detg = oracle::metric(spec, p.x).determinant();
      const double expect = std::pow(c.discriminant(), n) * detg * detg;
      CHECK(std::abs(determinant(v.coordinate_matrix) - expect) <= 1e-10 * std::abs(expect));
      CHECK(std::abs(determinant(v.adapted_blocks) - expect) <= 1e-10 * std::abs(expect));
      const AdaptedFrame f = adapted_frame(spec, p);
      const MatrixD congruent = f.coframe.transpose() * v.adapted_blocks * f.coframe;
      CHECK(max_abs(congruent - v.coordinate_matrix) <= 1e-12 * std::max(1.0, max_abs(v.coordinate_matrix)));
      if (signature_classify(c) == Signature::riemannian) CHECK(v.inertia.positive == 2 * n);
      ++count;
    }
    CHECK(count == 100);
  }
}
