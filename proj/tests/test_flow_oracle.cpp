#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace liftlab;

namespace {

double rel_defect(const MatrixD& a, const MatrixD& b, const MatrixD& scale) {
  return frobenius_norm(a - b) / std::max(frobenius_norm(b), frobenius_norm(scale));
}

}  // namespace

TEST_SUITE("flow_oracle") {
  TEST_CASE("zero field leaves everything unchanged") {
    const ManifoldSpec sphere = catalog_manifold("sphere2");
    const LiftField zero = complete_lift(BaseField::from_text("zero", {"0", "0"}, 2), sphere);
    const TMPoint p{{1.0, 0.5}, {0.3, -0.2}};
    for (double t : {0.1, -0.7, 2.0}) {
      const FlowState s = flow(zero, sphere, p, t, 16);
      CHECK(s.point.x == p.x);
      CHECK(s.point.y == p.y);
      CHECK(max_abs(s.jacobian - MatrixD::identity(4)) == 0.0);
    }
    CHECK(max_abs(numeric_lie_derivative(zero, sphere, {1, 0.5, 1}, p).matrix) == 0.0);
  }

  TEST_CASE("dilation flow is exponential") {
    const ManifoldSpec e2 = catalog_manifold("euclidean2");
    const LiftField dil = complete_lift(catalog_base_field("euclidean2", "dilation"), e2);
    const TMPoint p{{0.5, -0.25}, {1.0, 0.75}};
    const FlowState s = flow(dil, e2, p, 0.1, 100);
    const double e = std::exp(0.1);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(s.point.x[i] - e * p.x[i]) <= 1e-8);
      CHECK(std::abs(s.point.y[i] - e * p.y[i]) <= 1e-8);
    }
    CHECK(max_abs(s.jacobian - e * MatrixD::identity(4)) <= 1e-8);
    CHECK(s.t == 0.1);
  }

  TEST_CASE("oracle on the dilation gives twice the metric") {
    const ManifoldSpec e2 = catalog_manifold("euclidean2");
    const LiftField dil = complete_lift(catalog_base_field("euclidean2", "dilation"), e2);
    const TMPoint p{{0.5, -0.25}, {1.0, 0.75}};
    for (LiftMetricCoeffs c : {LiftMetricCoeffs{1, 0, 1}, LiftMetricCoeffs{1, 0.5, 1}, LiftMetricCoeffs{2, 1, 3}}) {
      const BilinearFormValue L = numeric_lie_derivative(dil, e2, c, p, OracleOptions{});
      CHECK(L.basis == Basis::coordinate);
      const LiftMetricValue G = lift_metric(e2, c, p);
      CHECK(max_abs(L.matrix - 2.0 * G.coordinate_matrix) <= 1e-6);
    }
  }

  TEST_CASE("oracle on the sphere rotation vanishes") {
    const ManifoldSpec sphere = catalog_manifold("sphere2");
    const LiftField rot = complete_lift(catalog_base_field("sphere2", "rotation"), sphere);
    std::mt19937_64 rng(107);
    for (int s = 0; s < 10; ++s) {
      const TMPoint p = oracle::random_tm_point(sphere, rng);
      CHECK(max_abs(numeric_lie_derivative(rot, sphere, {1, 0.5, 1}, p).matrix) <= 1e-6);
    }
  }

  TEST_CASE("group property") {
    std::mt19937_64 rng(109);
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      for (const LiftField& f : catalog_lift_fields(spec)) {
        const TMPoint p = oracle::random_tm_point(spec, rng);
        const FlowState a = flow(f, spec, p, 0.02, 32);
        const FlowState ab = flow(f, spec, a.point, 0.03, 48);
        const FlowState c = flow(f, spec, p, 0.05, 80);
        for (int i = 0; i < spec.dim(); ++i) {
          CHECK_MESSAGE(std::abs(ab.point.x[i] - c.point.x[i]) <= 1e-7, name, " ", f.name());
          CHECK_MESSAGE(std::abs(ab.point.y[i] - c.point.y[i]) <= 1e-7, name, " ", f.name());
        }
        // chain rule for the Jacobians
        CHECK(max_abs(ab.jacobian * a.jacobian - c.jacobian) <= 1e-7);
      }
    }
  }

  TEST_CASE("flow Jacobian matches finite differences of the flow map") {
    std::mt19937_64 rng(113);
    for (const char* name : {"sphere2", "halfplane2", "polar2"}) {
      const ManifoldSpec spec = catalog_manifold(name);
      const int dim = 2 * spec.dim();
      for (const LiftField& f : catalog_lift_fields(spec)) {
        const TMPoint p = oracle::random_tm_point(spec, rng);
        const FlowState s = flow(f, spec, p, 0.05, 64);
        const std::vector<double> z = p.coords();
        for (int nu = 0; nu < dim; ++nu) {
          std::vector<double> zp = z, zm = z;
          zp[nu] += 1e-6;
          zm[nu] -= 1e-6;
          const auto fp = flow(f, spec, TMPoint::from_coords(zp), 0.05, 64).point.coords();
          const auto fm = flow(f, spec, TMPoint::from_coords(zm), 0.05, 64).point.coords();
          for (int mu = 0; mu < dim; ++mu) CHECK(std::abs((fp[mu] - fm[mu]) / 2e-6 - s.jacobian(mu, nu)) <= 1e-5);
        }
      }
    }
  }

  TEST_CASE("Richardson: halving t_step quarters the defect") {
    const ManifoldSpec e2 = catalog_manifold("euclidean2");
    const ManifoldSpec sphere = catalog_manifold("sphere2");
    const ManifoldSpec hp = catalog_manifold("halfplane2");
    const std::vector<std::pair<const ManifoldSpec*, LiftField>> cases = {
        {&e2, complete_lift(catalog_base_field("euclidean2", "conformal_z2"), e2)},
        {&sphere, complete_lift(catalog_base_field("sphere2", "generic"), sphere)},
        {&hp, horizontal_lift(catalog_base_field("halfplane2", "dilation"), hp)},
    };
    const LiftMetricCoeffs c{1, 0.5, 1};
    for (const auto& [spec, f] : cases) {
      TMPoint q{std::vector<double>(spec->domain().lo.size()), {0.6, -0.4}};
      for (std::size_t i = 0; i < q.x.size(); ++i) q.x[i] = 0.5 * (spec->domain().lo[i] + spec->domain().hi[i]) + 0.1;
      const MatrixD closed = to_coordinate_basis(lie_gtilde(f, *spec, c, q), *spec).matrix;
      OracleOptions o1, o2;
      o1.t_step = 2e-2;
      o1.steps = 256;
      o2.t_step = 1e-2;
      o2.steps = 256;
      const double d1 = max_abs(numeric_lie_derivative(f, *spec, c, q, o1).matrix - closed);
      const double d2 = max_abs(numeric_lie_derivative(f, *spec, c, q, o2).matrix - closed);
      const double ratio = d1 / d2;
      CHECK_MESSAGE(ratio > 3.5, spec->name(), " ratio ", ratio);
      CHECK_MESSAGE(ratio < 4.5, spec->name(), " ratio ", ratio);
    }
  }

  TEST_CASE("oracle agrees with the closed form across the catalog") {
    std::mt19937_64 rng(127);
    double worst = 0.0;
    for (const auto& name : catalog_manifold_names()) {
      const ManifoldSpec spec = catalog_manifold(name);
      for (const LiftField& f : catalog_lift_fields(spec)) {
        const TMPoint p = oracle::random_tm_point(spec, rng);
        for (LiftMetricCoeffs c : {LiftMetricCoeffs{1, 0, 1}, LiftMetricCoeffs{0, 1, 0}, LiftMetricCoeffs{2, 1, 3}}) {
          const MatrixD o = numeric_lie_derivative(f, spec, c, p).matrix;
          const MatrixD closed = to_coordinate_basis(lie_gtilde(f, spec, c, p), spec).matrix;
          const double d = rel_defect(closed, o, lift_metric(spec, c, p).coordinate_matrix);
          worst = std::max(worst, d);
          CHECK_MESSAGE(d <= 1e-5, name, " ", f.name());
        }
      }
    }
    MESSAGE("worst relative defect ", worst);
  }

  TEST_CASE("leaving the chart box is an error") {
    const ManifoldSpec hp = catalog_manifold("halfplane2");
    const LiftField f = vertical_lift(BaseField::from_text("c", {"1", "0"}, 2), hp);
    const LiftField h = horizontal_lift(BaseField::from_text("c", {"0", "-1"}, 2), hp);
    CHECK_THROWS_AS(flow(h, hp, TMPoint{{0.0, 0.6}, {0.0, 0.0}}, 1.0, 32), GeometryError);
    CHECK_NOTHROW(flow(f, hp, TMPoint{{0.0, 1.0}, {0.0, 0.0}}, 0.5, 32));
    OracleOptions bad;
    bad.t_step = 0.0;
    CHECK_THROWS_AS(numeric_lie_derivative(f, hp, {1, 0, 1}, TMPoint{{0.0, 1.0}, {0, 0}}, bad), GeometryError);
  }
}
