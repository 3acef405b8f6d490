#include "liftlab/flow_oracle.hpp"

#include <cmath>

namespace liftlab {

namespace {

struct Derivative {
  std::vector<double> dz;
  MatrixD dj;
};

// Right-hand side of  z' = Z(z),  J' = DZ(z) J.
Derivative rhs(const LiftField& x, const ManifoldSpec& spec, const std::vector<double>& z, const MatrixD& J) {
  const int n = spec.dim();
  const int dim = 2 * n;
  if (!spec.domain().contains(std::span<const double>(z).subspan(0, static_cast<std::size_t>(n))))
    throw GeometryError("flow left the chart domain of '" + spec.name() + "'");
  for (double v : z)
    if (!std::isfinite(v)) throw GeometryError("flow produced non-finite values");

  std::vector<Dual<double>> zd = lift_point<double>(z);
  Derivative out;
  out.dz.assign(static_cast<std::size_t>(dim), 0.0);
  MatrixD DZ(dim, dim);  // DZ(mu, nu) = dZ^mu / dz^nu
  for (int nu = 0; nu < dim; ++nu) {
    zd[nu].d = 1.0;
    std::span<const Dual<double>> all(zd);
    const std::vector<Dual<double>> Z = coordinate_components<Dual<double>>(
        x, spec, all.subspan(0, static_cast<std::size_t>(n)), all.subspan(static_cast<std::size_t>(n)));
    zd[nu].d = 0.0;
    for (int mu = 0; mu < dim; ++mu) {
      DZ(mu, nu) = Z[mu].d;
      if (nu == 0) out.dz[mu] = Z[mu].v;
    }
  }
  out.dj = DZ * J;
  return out;
}

}  // namespace

FlowState flow(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p0, double t, int steps) {
  const int n = spec.dim();
  if (steps < 1) throw GeometryError("flow needs a positive step count");
  if (p0.dim() != n || static_cast<int>(p0.y.size()) != n || x.dim() != n)
    throw GeometryError("flow: dimension mismatch");
  const int dim = 2 * n;
  std::vector<double> z = p0.coords();
  MatrixD J = MatrixD::identity(dim);
  const double h = t / steps;

  auto axpy = [](const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * b[i];
    return r;
  };

  for (int s = 0; s < steps; ++s) {
    const Derivative k1 = rhs(x, spec, z, J);
    const Derivative k2 = rhs(x, spec, axpy(z, 0.5 * h, k1.dz), J + (0.5 * h) * k1.dj);
    const Derivative k3 = rhs(x, spec, axpy(z, 0.5 * h, k2.dz), J + (0.5 * h) * k2.dj);
    const Derivative k4 = rhs(x, spec, axpy(z, h, k3.dz), J + h * k3.dj);
    for (int i = 0; i < dim; ++i) z[i] += h / 6.0 * (k1.dz[i] + 2.0 * k2.dz[i] + 2.0 * k3.dz[i] + k4.dz[i]);
    J += (h / 6.0) * (k1.dj + 2.0 * k2.dj + 2.0 * k3.dj + k4.dj);
  }
  if (!spec.domain().contains(std::span<const double>(z).subspan(0, static_cast<std::size_t>(n))))
    throw GeometryError("flow left the chart domain of '" + spec.name() + "'");

  FlowState st;
  st.point = TMPoint::from_coords(z);
  st.jacobian = std::move(J);
  st.t = t;
  return st;
}

FlowPair flow_pair(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p0, const OracleOptions& opt) {
  if (!(opt.t_step > 0.0)) throw GeometryError("oracle t_step must be positive");
  FlowPair fp;
  fp.t_step = opt.t_step;
  fp.plus = flow(x, spec, p0, opt.t_step, opt.steps);
  fp.minus = flow(x, spec, p0, -opt.t_step, opt.steps);
  return fp;
}

MatrixD pullback_derivative(const FlowPair& fp, const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs) {
  auto pulled = [&](const FlowState& st) {
    const MatrixD G = coordinate_lift_metric<double>(spec, coeffs, st.point.x, st.point.y);
    return st.jacobian.transpose() * G * st.jacobian;
  };
  MatrixD d = pulled(fp.plus) - pulled(fp.minus);
  d *= 1.0 / (2.0 * fp.t_step);
  return d;
}

BilinearFormValue numeric_lie_derivative(const LiftField& x, const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                                         const TMPoint& p0, const OracleOptions& opt) {
  require_nonsingular(coeffs);
  BilinearFormValue v;
  v.point = p0;
  v.basis = Basis::coordinate;
  v.matrix = symmetrize(pullback_derivative(flow_pair(x, spec, p0, opt), spec, coeffs));
  v.symmetric = true;
  return v;
}

}  // namespace liftlab
