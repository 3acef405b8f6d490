#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace liftlab;

namespace {

// Coordinate matrix of gt built from the finite-difference oracle connection.
Eigen::MatrixXd oracle_gt(const ManifoldSpec& spec, const LiftMetricCoeffs& c, const std::vector<double>& z) {
  const int n = spec.dim();
  const std::vector<double> x(z.begin(), z.begin() + n), y(z.begin() + n, z.end());
  const Eigen::MatrixXd g = oracle::metric(spec, x);
  const auto G = oracle::christoffel(spec, x, 1e-6);
  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) W(n + h, i) += y[a] * G[h][a][i];
  Eigen::MatrixXd A(2 * n, 2 * n);
  A << c.a * g, c.b * g, c.b * g, c.c * g;
  return W.transpose() * A * W;
}

// (L_Z G)_{mu nu} = Z^r d_r G_{mu nu} + G_{r nu} d_mu Z^r + G_{mu r} d_nu Z^r, all by central differences.
Eigen::MatrixXd oracle_lie(const LiftField& f, const ManifoldSpec& spec, const LiftMetricCoeffs& c, const TMPoint& p) {
  const int dim = 2 * spec.dim();
  const std::vector<double> z = p.coords();
  const auto comps = [&](const std::vector<double>& w) {
    const TMPoint q = TMPoint::from_coords(w);
    return coordinate_components(f, spec, q);
  };
  const std::vector<double> Z = comps(z);
  const Eigen::MatrixXd G = oracle_gt(spec, c, z);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd dZ(dim, dim);  // dZ(mu, r) = d_mu Z^r
  const double h = 1e-4;
  for (int r = 0; r < dim; ++r) {
    std::vector<double> zp = z, zm = z;
    zp[r] += h;
    zm[r] -= h;
    L += Z[r] * (oracle_gt(spec, c, zp) - oracle_gt(spec, c, zm)) / (2 * h);
    const auto a = comps(zp), b = comps(zm);
    for (int k = 0; k < dim; ++k) dZ(r, k) = (a[k] - b[k]) / (2 * h);
  }
  L += dZ * G + G * dZ.transpose();
  return L;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& scale) {
  return (a - b).norm() / std::max(b.norm(), scale.norm());
}

}  // namespace

TEST_SUITE("lie_calculus") {
  TEST_CASE("base Lie derivative examples") {
    const ManifoldSpec e2 = catalog_manifold("euclidean2");
    const double p[] = {0.4, -1.2};
    const auto rot = base_lie_derivative(catalog_base_field("euclidean2", "rotation"), TensorSource::metric_tensor(), e2, p);
    for (double v : rot.partial_form) CHECK(std::abs(v) <= 1e-15);
    const auto dil = base_lie_derivative(catalog_base_field("euclidean2", "dilation"), TensorSource::metric_tensor(), e2, p);
    // d_i V^a = delta_i^a, so L_V g = 2 g
    CHECK(dil.partial_form == std::vector<double>{2.0, 0.0, 0.0, 2.0});
    CHECK(dil.max_discrepancy() <= 1e-12);

    const ManifoldSpec sphere = catalog_manifold("sphere2");
    std::mt19937_64 rng(73);
    for (int s = 0; s < 20; ++s) {
      const auto x = oracle::random_point(sphere, rng);
      const auto r = base_lie_derivative(catalog_base_field("sphere2", "rotation"), TensorSource::metric_tensor(), sphere, x);
      for (double v : r.partial_form) CHECK(std::abs(v) <= 1e-14);
      for (double v : r.covariant_form) CHECK(std::abs(v) <= 1e-12);
    }
  }

  TEST_CASE("partial and covariant forms agree") {
    std::mt19937_64 rng(79);
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      const auto partners = eq1_partners(spec);
      for (const BaseField& v : catalog_base_fields(name)) {
        for (int s = 0; s < 5; ++s) {
          const auto x = oracle::random_point(spec, rng);
          CHECK(base_lie_derivative(v, TensorSource::metric_tensor(), spec, x).max_discrepancy() <= 1e-9);
          for (const ManifoldSpec& other : partners) {
            const auto d = base_lie_derivative(v, TensorSource::connection_difference(other), spec, x);
            CHECK(d.type == TensorType::mixed12);
            CHECK_MESSAGE(d.max_discrepancy() <= 1e-9, name, " vs ", other.name(), " field ", v.name);
          }
        }
      }
    }
  }

  TEST_CASE("Lie derivative of a cov2 expression tensor matches finite differences") {
    const ManifoldSpec spec = catalog_manifold("sphere2");
    const BaseField v = catalog_base_field("sphere2", "generic");
    std::vector<Expr> S = {parse("x1*x2", 2), parse("sin(x2)", 2), parse("sin(x2)", 2), parse("1 + x1^2", 2)};
    const std::vector<double> x = {1.1, 0.4};
    const auto d = base_lie_derivative(v, TensorSource::cov2_exprs(S), spec, x);
    const double h = 1e-5;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double expect = 0.0;
        for (int r = 0; r < 2; ++r) {
          std::vector<double> xp = x, xm = x;
          xp[r] += h;
          xm[r] -= h;
          expect += eval(v.components[r], x) * (eval(S[i * 2 + j], xp) - eval(S[i * 2 + j], xm)) / (2 * h);
        }
        for (int r = 0; r < 2; ++r) {
          std::vector<double> xpi = x, xmi = x, xpj = x, xmj = x;
          xpi[i] += h;
          xmi[i] -= h;
          xpj[j] += h;
          xmj[j] -= h;
          expect += eval(S[r * 2 + j], x) * (eval(v.components[r], xpi) - eval(v.components[r], xmi)) / (2 * h);
          expect += eval(S[i * 2 + r], x) * (eval(v.components[r], xpj) - eval(v.components[r], xmj)) / (2 * h);
        }
        CHECK(d.partial_form[i * 2 + j] == doctest::Approx(expect).epsilon(1e-8).scale(1.0));
      }
  }

  TEST_CASE("frame brackets") {
    std::mt19937_64 rng(83);
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      const int n = spec.dim();
      for (int s = 0; s < 5; ++s) {
        const TMPoint p = oracle::random_tm_point(spec, rng);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int bi = 0; bi < 2; ++bi)
              for (int bj = 0; bj < 2; ++bj) {
                const FrameSlot a{i, bi == 1}, b{j, bj == 1};
                const auto c = adapted_bracket(spec, p, a, b);
                const auto num = numeric_bracket(spec, p, a, b);
                for (int k = 0; k < 2 * n; ++k) CHECK(std::abs(c[k] - num[k]) <= 1e-6);
                if (a.bar && b.bar)
                  for (double v : c) CHECK(v == 0.0);
                for (int k = 0; k < n; ++k) CHECK(c[k] == 0.0);
              }
      }
    }
  }

  TEST_CASE("sphere bracket against the curvature oracle") {
    const ManifoldSpec sphere = catalog_manifold("sphere2");
    const TMPoint p{{std::numbers::pi / 3, 0.0}, {1.0, 0.0}};
    const auto K = oracle::curvature(sphere, p.x);
    const auto c = adapted_bracket(sphere, p, {0, false}, {1, false});
    // [X_theta, X_phi]^m = y^r K_{phi theta r}^m
    for (int m = 0; m < 2; ++m) {
      double expect = 0.0;
      for (int r = 0; r < 2; ++r) expect += p.y[r] * K[((1 * 2 + 0) * 2 + r) * 2 + m];
      CHECK(std::abs(c[2 + m] - expect) <= 1e-5);
    }
    CHECK(std::abs(c[3]) > 0.1);
  }

  TEST_CASE("lie_frame examples and duality") {
    const ManifoldSpec e2 = catalog_manifold("euclidean2");
    const TMPoint p{{0.5, -0.5}, {0.25, 1.0}};
    const LiftField vc = vertical_lift(BaseField::from_text("c", {"1", "2"}, 2), e2);
    const LieFrameValue z = lie_frame(vc, e2, p);
    CHECK(max_abs(z.frame) == 0.0);
    CHECK(max_abs(z.coframe) == 0.0);

    const LiftField shear = affine_fiber_field(e2, AffineFiberField::from_text({{"0", "0"}, {"0", "0"}}, {"0", "0"}, {"x2", "0"}, 2));
    const LieFrameValue s = lie_frame(shear, e2, p);
    // L_X dx^1 = dx^2
    CHECK(s.coframe(0, 0) == 0.0);
    CHECK(s.coframe(0, 1) == 1.0);

    const LiftField dil = complete_lift(catalog_base_field("euclidean2", "dilation"), e2);
    const LieFrameValue d = lie_frame(dil, e2, p);
    // flat dilation: L_X dy^h = d(X(y^h)) = dy^h
    for (int h = 0; h < 2; ++h)
      for (int k = 0; k < 4; ++k) CHECK(d.coframe(2 + h, k) == (k == 2 + h ? 1.0 : 0.0));

    std::mt19937_64 rng(89);
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      for (const LiftField& f : catalog_lift_fields(spec))
        for (int k = 0; k < 3; ++k) CHECK(lie_frame(f, spec, oracle::random_tm_point(spec, rng)).duality_defect() <= 1e-9);
    }
    CHECK_THROWS_AS(lie_frame(general_field(e2, {"y1", "0"}, {"0", "0"}), e2, p), GeometryError);
  }

  TEST_CASE("lie_g1, lie_g2, lie_g3 examples") {
    const ManifoldSpec e2 = catalog_manifold("euclidean2");
    std::mt19937_64 rng(97);
    const LiftField dil = complete_lift(catalog_base_field("euclidean2", "dilation"), e2);
    const LiftField rot = complete_lift(catalog_base_field("euclidean2", "rotation"), e2);
    const ManifoldSpec sphere = catalog_manifold("sphere2");
    const LiftField gen_v = vertical_lift(catalog_base_field("sphere2", "generic"), sphere);
    for (int s = 0; s < 10; ++s) {
      const TMPoint p = oracle::random_tm_point(e2, rng);
      const auto g1 = lie_g1(dil, e2, p);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(g1.matrix(i, j) == doctest::Approx(i < 2 && j < 2 ? 2.0 * (i == j) : 0.0));
      CHECK(max_abs(lie_g3(rot, e2, p).matrix) <= 1e-14);
      CHECK(max_abs(lie_g2(rot, e2, p).matrix) <= 1e-14);
      const TMPoint q = oracle::random_tm_point(sphere, rng);
      CHECK(max_abs(lie_g1(gen_v, sphere, q).matrix) == 0.0);
      // only the horizontal block of lie_g1 is populated
      const auto g1s = lie_g1(complete_lift(catalog_base_field("sphere2", "generic"), sphere), sphere, q);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (i >= 2 || j >= 2) CHECK(g1s.matrix(i, j) == 0.0);
    }
  }

  TEST_CASE("lie_gtilde examples") {
    std::mt19937_64 rng(101);
    const ManifoldSpec e2 = catalog_manifold("euclidean2");
    const ManifoldSpec torus = catalog_manifold("torus_flat2");
    const LiftField rot = complete_lift(catalog_base_field("euclidean2", "rotation"), e2);
    const LiftField dil = complete_lift(catalog_base_field("euclidean2", "dilation"), e2);
    const LiftField tv = vertical_lift(catalog_base_field("torus_flat2", "const1"), torus);
    for (LiftMetricCoeffs c : {LiftMetricCoeffs{1, 0, 1}, LiftMetricCoeffs{1, 0.5, 1}, LiftMetricCoeffs{2, 1, 3}, LiftMetricCoeffs{0, 1, 0}}) {
      for (int s = 0; s < 5; ++s) {
        const TMPoint p = oracle::random_tm_point(e2, rng);
        CHECK(max_abs(lie_gtilde(rot, e2, c, p).matrix) <= 1e-14);
        const auto L = lie_gtilde(dil, e2, c, p);
        const LiftMetricValue G = lift_metric(e2, c, p);
        CHECK(max_abs(L.matrix - 2.0 * G.adapted_blocks) <= 1e-14);
        CHECK(L.symmetric);
        CHECK(L.basis == Basis::adapted);
      }
    }
    const TMPoint q = oracle::random_tm_point(torus, rng);
    CHECK(max_abs(lie_gtilde(tv, torus, {1, 0.5, 1}, q).matrix) == 0.0);
  }

  TEST_CASE("lie_gtilde matches the coordinate component oracle") {
    std::mt19937_64 rng(103);
    const std::vector<LiftMetricCoeffs> coeffs = {{1, 0, 1}, {1, 0.5, 1}, {2, 1, 3}, {0, 1, 0}};
    double worst = 0.0;
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      for (const LiftField& f : catalog_lift_fields(spec)) {
        const TMPoint p = oracle::random_tm_point(spec, rng);
        for (const auto& c : coeffs) {
          const BilinearFormValue L = to_coordinate_basis(lie_gtilde(f, spec, c, p), spec);
          const Eigen::MatrixXd expect = oracle_lie(f, spec, c, p);
          const double d = rel(oracle::to_eigen(L.matrix), expect, oracle_gt(spec, c, p.coords()));
          worst = std::max(worst, d);
          CHECK_MESSAGE(d <= 1e-5, name, " ", f.name());
        }
      }
    }
    MESSAGE("worst relative defect ", worst);
  }

  TEST_CASE("perturbation hook changes the closed form") {
    const ManifoldSpec sphere = catalog_manifold("sphere2");
    const LiftField f = complete_lift(catalog_base_field("sphere2", "rotation"), sphere);
    const TMPoint p{{1.0, 0.5}, {0.3, 0.7}};
    ClosedFormOptions bad;
    bad.perturb = true;
    const auto a = lie_gtilde(f, sphere, {1, 0.5, 1}, p);
    const auto b = lie_gtilde(f, sphere, {1, 0.5, 1}, p, bad);
    CHECK(max_abs(a.matrix - b.matrix) > 1e-3);
  }
}
