#include "liftlab/tangent_bundle.hpp"

#include <cmath>
#include <sstream>

namespace liftlab {

std::vector<double> TMPoint::coords() const {
  std::vector<double> z(x);
  z.insert(z.end(), y.begin(), y.end());
  return z;
}

TMPoint TMPoint::from_coords(std::span<const double> z) {
  const std::size_t n = z.size() / 2;
  TMPoint p;
  p.x.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
  p.y.assign(z.begin() + static_cast<std::ptrdiff_t>(n), z.end());
  return p;
}

std::string to_string(Signature s) {
  switch (s) {
    case Signature::riemannian: return "riemannian";
    case Signature::pseudo: return "pseudo";
    case Signature::singular: return "singular";
  }
  return "unknown";
}

Signature signature_classify(const LiftMetricCoeffs& c) {
  const double disc = c.discriminant();
  if (disc == 0.0) return Signature::singular;
  if (c.a > 0.0 && disc > 0.0) return Signature::riemannian;
  return Signature::pseudo;
}

void require_nonsingular(const LiftMetricCoeffs& c) {
  if (c.discriminant() == 0.0) throw ConfigError("singular coefficients: ac - b^2 = 0");
}

std::string LiftMetricValue::signature_report() const {
  std::ostringstream os;
  if (inertia.zero > 0) {
    os << "degenerate";
  } else if (inertia.negative == 0) {
    os << "riemannian";
  } else {
    os << "pseudo-riemannian";
  }
  os << " (" << inertia.positive << ", " << inertia.negative << ")";
  return os.str();
}

namespace {

void check_point(const ManifoldSpec& spec, const TMPoint& p) {
  if (p.dim() != spec.dim() || static_cast<int>(p.y.size()) != spec.dim())
    throw GeometryError("tangent-bundle point dimension does not match manifold '" + spec.name() + "'");
}

}  // namespace

MatrixD nonlinear_connection(const ManifoldSpec& spec, const TMPoint& p) {
  check_point(spec, p);
  const MetricJet<double> jet = metric_jet<double>(spec, p.x);
  return connection_coefficients<double>(jet.gamma, p.y);
}

MatrixD chart_transform_n(const ManifoldSpec& spec_from, const ManifoldSpec& spec_to,
                          const std::vector<Expr>& chart_map, const TMPoint& p) {
  const int n = spec_to.dim();
  if (spec_from.dim() != n || static_cast<int>(chart_map.size()) != n)
    throw GeometryError("chart map dimension mismatch");
  check_point(spec_to, p);
  for (const Expr& e : chart_map)
    if (e.dim() != n) throw GeometryError("chart map expressions must be over the target chart variables");

  // J(h, a) = dx^h/dx'^a,  H[h](a, b) = d^2 x^h / dx'^a dx'^b
  MatrixD J(n, n);
  std::vector<MatrixD> H(static_cast<std::size_t>(n), MatrixD(n, n));
  EvalPoint x_src(static_cast<std::size_t>(n));
  for (int h = 0; h < n; ++h) {
    x_src[h] = eval(chart_map[h], p.x);
    for (int a = 0; a < n; ++a) {
      J(h, a) = derivative(chart_map[h], p.x, a);
      for (int b = a; b < n; ++b) {
        H[h](a, b) = derivative(chart_map[h], p.x, a, b);
        H[h](b, a) = H[h](a, b);
      }
    }
  }
  if (std::abs(determinant(J)) < 1e-12) throw GeometryError("chart map has a singular Jacobian");
  const MatrixD Jinv = inverse(J);  // dx'^h'/dx^h

  TMPoint src;
  src.x = x_src;
  src.y.assign(static_cast<std::size_t>(n), 0.0);
  for (int h = 0; h < n; ++h)
    for (int a = 0; a < n; ++a) src.y[h] += J(h, a) * p.y[a];
  const MatrixD N = nonlinear_connection(spec_from, src);

  MatrixD out(n, n);
  for (int ip = 0; ip < n; ++ip)
    for (int hp = 0; hp < n; ++hp) {
      double acc = 0.0;
      for (int h = 0; h < n; ++h) {
        double inner = 0.0;
        for (int i = 0; i < n; ++i) inner += J(i, ip) * N(i, h);
        for (int a = 0; a < n; ++a) inner += H[h](ip, a) * p.y[a];
        acc += Jinv(hp, h) * inner;
      }
      out(ip, hp) = acc;
    }
  return out;
}

AdaptedFrame adapted_frame(const ManifoldSpec& spec, const TMPoint& p) {
  AdaptedFrame f;
  f.point = p;
  f.n_coeffs = nonlinear_connection(spec, p);
  f.frame = frame_matrix(f.n_coeffs);
  f.coframe = coframe_matrix(f.n_coeffs);
  const MatrixD dual = f.frame * f.coframe.transpose();
  const MatrixD id = MatrixD::identity(2 * spec.dim());
  if (max_abs(dual - id) > 1e-12 * std::max(1.0, max_abs(f.n_coeffs)))
    throw GeometryError("adapted frame and coframe are not dual");
  return f;
}

LiftMetricValue lift_metric(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs, const TMPoint& p) {
  require_nonsingular(coeffs);
  check_point(spec, p);
  const MetricJet<double> jet = metric_jet<double>(spec, p.x);
  const MatrixD W = coframe_matrix(connection_coefficients<double>(jet.gamma, p.y));
  LiftMetricValue v;
  v.point = p;
  v.adapted_blocks = lift_metric_blocks(jet.g, coeffs);
  v.coordinate_matrix = W.transpose() * v.adapted_blocks * W;
  v.inertia = inertia(v.adapted_blocks);
  return v;
}

}  // namespace liftlab
