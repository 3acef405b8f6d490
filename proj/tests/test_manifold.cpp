#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace liftlab;

TEST_SUITE("manifold") {
  TEST_CASE("metric values") {
    const ManifoldSpec e2 = catalog_manifold("euclidean2");
    const double p[] = {0.3, -1.1};
    const MetricValue m = metric_at(e2, p);
    CHECK(m.g(0, 0) == 1.0);
    CHECK(m.g(0, 1) == 0.0);
    CHECK(m.g(1, 1) == 1.0);

    const ManifoldSpec polar = catalog_manifold("polar2");
    const double q[] = {2.0, 0.0};
    const MetricValue pm = metric_at(polar, q);
    CHECK(pm.g(1, 1) == 4.0);
    CHECK(pm.ginv(1, 1) == 0.25);
    CHECK(pm.ginv(0, 0) == 1.0);

    const ManifoldSpec hp = catalog_manifold("halfplane2");
    const double r[] = {0.0, 2.0};
    const MetricValue hm = metric_at(hp, r);
    CHECK(hm.g(0, 0) == 0.25);
    CHECK(hm.g(1, 1) == 0.25);
  }

  TEST_CASE("inverse metric on the catalog") {
    std::mt19937_64 rng(3);
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      for (int k = 0; k < 20; ++k) {
        const auto x = oracle::random_point(spec, rng);
        const MetricValue m = metric_at(spec, x);
        CHECK(max_abs(m.g * m.ginv - MatrixD::identity(spec.dim())) <= 1e-12);
      }
    }
  }

  TEST_CASE("christoffel examples") {
    const ManifoldSpec e3 = catalog_manifold("euclidean3");
    const double p[] = {0.1, 0.2, 0.3};
    const ChristoffelValue c = christoffel(e3, p);
    for (double v : c.gamma.data) CHECK(v == 0.0);

    // polar diag(1, r^2): Gamma^r_{tt} = -r, Gamma^t_{rt} = 1/r
    const ManifoldSpec polar = catalog_manifold("polar2");
    const double q[] = {2.0, 0.0};
    const ChristoffelValue pc = christoffel(polar, q);
    CHECK(pc.gamma(0, 1, 1) == doctest::Approx(-2.0));
    CHECK(pc.gamma(1, 0, 1) == doctest::Approx(0.5));
    CHECK(pc.gamma(1, 1, 0) == doctest::Approx(0.5));
    const auto fd = oracle::christoffel(polar, {2.0, 0.0});
    CHECK(fd[0][1][1] == doctest::Approx(-2.0).epsilon(1e-8));
    CHECK(fd[1][0][1] == doctest::Approx(0.5).epsilon(1e-8));

    // half-plane at (0, 1)
    const ManifoldSpec hp = catalog_manifold("halfplane2");
    const double r[] = {0.0, 1.0};
    const ChristoffelValue hc = christoffel(hp, r);
    CHECK(hc.gamma(0, 0, 1) == doctest::Approx(-1.0));
    CHECK(hc.gamma(1, 0, 0) == doctest::Approx(1.0));
    CHECK(hc.gamma(1, 1, 1) == doctest::Approx(-1.0));
    CHECK(hc.gamma(0, 0, 0) == 0.0);
  }

  TEST_CASE("christoffel matches finite-difference oracle and is symmetric") {
    std::mt19937_64 rng(9);
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      const int n = spec.dim();
      for (int k = 0; k < 10; ++k) {
        const auto x = oracle::random_point(spec, rng);
        const ChristoffelValue c = christoffel(spec, x);
        const auto fd = oracle::christoffel(spec, x);
        for (int a = 0; a < n; ++a)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              CHECK(std::abs(c.gamma(a, i, j) - fd[a][i][j]) <= 1e-7);
              CHECK(c.gamma(a, i, j) == c.gamma(a, j, i));
            }
      }
    }
  }

  TEST_CASE("metric compatibility at 100 points per catalog manifold") {
    std::mt19937_64 rng(11);
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      const int n = spec.dim();
      double worst = 0.0;
      for (int s = 0; s < 100; ++s) {
        const auto x = oracle::random_point(spec, rng);
        const MetricJet<double> jet = metric_jet<double>(spec, std::span<const double>(x));
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double v = jet.dg[k](i, j);
              for (int a = 0; a < n; ++a) v -= jet.gamma(a, k, i) * jet.g(a, j) + jet.gamma(a, k, j) * jet.g(i, a);
              worst = std::max(worst, std::abs(v));
            }
      }
      CHECK_MESSAGE(worst <= 1e-9, name);
    }
  }

  TEST_CASE("curvature: flat charts vanish, antisymmetry, oracle") {
    std::mt19937_64 rng(13);
    for (const char* name : {"euclidean2", "euclidean3", "polar2", "torus_flat2"}) {
      const ManifoldSpec spec = catalog_manifold(name);
      for (int s = 0; s < 20; ++s) {
        const auto x = oracle::random_point(spec, rng);
        const CurvatureValue k = curvature(spec, x);
        double norm = 0.0;
        for (double v : k.k.data) norm = std::max(norm, std::abs(v));
        CHECK_MESSAGE(norm <= 1e-9, name);
      }
    }
    // polar Christoffels do not vanish even though the curvature does
    const double q[] = {1.5, 0.3};
    CHECK(christoffel(catalog_manifold("polar2"), q).gamma(0, 1, 1) != 0.0);

    for (const char* name : {"sphere2", "halfplane2"}) {
      const ManifoldSpec spec = catalog_manifold(name);
      for (int s = 0; s < 10; ++s) {
        const auto x = oracle::random_point(spec, rng);
        const CurvatureValue k = curvature(spec, x);
        const auto fd = oracle::curvature(spec, x);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            for (int a = 0; a < 2; ++a)
              for (int m = 0; m < 2; ++m) {
                CHECK(k.k(i, j, a, m) == doctest::Approx(-k.k(j, i, a, m)).scale(1.0).epsilon(1e-14));
                CHECK(std::abs(k.k(i, j, a, m) - fd[((i * 2 + j) * 2 + a) * 2 + m]) <= 1e-5);
              }
      }
    }
  }

  TEST_CASE("sectional curvature and the constant-curvature identity") {
    const ManifoldSpec sphere = catalog_manifold("sphere2");
    const double eq[] = {std::numbers::pi / 2, 0.0};
    CHECK(curvature(sphere, eq).sectional.value() == doctest::Approx(1.0).epsilon(1e-8));

    std::mt19937_64 rng(19);
    for (auto [name, kappa] : {std::pair{"sphere2", 1.0}, std::pair{"halfplane2", -1.0}}) {
      const ManifoldSpec spec = catalog_manifold(name);
      for (int s = 0; s < 50; ++s) {
        const auto x = oracle::random_point(spec, rng);
        const CurvatureValue k = curvature(spec, x);
        CHECK(std::abs(*k.sectional - kappa) <= 1e-7);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            for (int a = 0; a < 2; ++a)
              for (int m = 0; m < 2; ++m) {
                const double expect = kappa * (k.g(i, a) * k.g(j, m) - k.g(j, a) * k.g(i, m));
                CHECK(std::abs(k.lowered(i, j, a, m) - expect) <= 1e-7);
              }
      }
    }
  }

  TEST_CASE("sphere radius scales the sectional curvature") {
    const ManifoldSpec s2 = catalog_manifold("sphere2", 2.0);
    const double p[] = {1.0, 0.5};
    CHECK(curvature(s2, p).sectional.value() == doctest::Approx(0.25).epsilon(1e-10));
  }

  TEST_CASE("spec validation") {
    CHECK_THROWS_AS(ManifoldSpec::from_text("bad", {{"1", "x1"}, {"0", "1"}}, std::nullopt), GeometryError);
    CHECK_THROWS_AS(ManifoldSpec::from_text("neg", {{"-1", "0"}, {"0", "1"}}, std::nullopt), GeometryError);
    CHECK_THROWS_AS(ManifoldSpec::from_text("shape", {{"1", "0"}}, std::nullopt), GeometryError);
    CHECK_THROWS(catalog_manifold("klein_bottle"));
    CHECK_NOTHROW(catalog_manifold("euclidean5"));
    const ManifoldSpec custom = ManifoldSpec::from_text("c", {{"1 + x1^2", "0"}, {"0", "1"}}, std::nullopt);
    CHECK(custom.domain().lo[0] == -1.0);
    CHECK(custom.domain().hi[1] == 1.0);
  }
}
