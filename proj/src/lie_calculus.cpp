#include "liftlab/lie_calculus.hpp"

#include <cmath>

namespace liftlab {

void require_fiber_preserving(const LiftField& field) {
  if (field.kind() == LiftKind::general)
    throw GeometryError("closed-form Lie derivatives require a fiber-preserving field (got kind 'general')");
}

// ---------------------------------------------------------------------------
// Base manifold

std::string to_string(TensorType t) {
  switch (t) {
    case TensorType::cov2: return "(0,2)";
    case TensorType::mixed11: return "(1,1)";
    case TensorType::mixed12: return "(1,2)";
  }
  return "?";
}

TensorSource TensorSource::metric_tensor() { return TensorSource{}; }

TensorSource TensorSource::cov2_exprs(std::vector<Expr> e) {
  TensorSource s;
  s.type = TensorType::cov2;
  s.origin = Origin::expressions;
  s.exprs = std::move(e);
  return s;
}

TensorSource TensorSource::mixed11_exprs(std::vector<Expr> e) {
  TensorSource s;
  s.type = TensorType::mixed11;
  s.origin = Origin::expressions;
  s.exprs = std::move(e);
  return s;
}

TensorSource TensorSource::connection_difference(const ManifoldSpec& other) {
  TensorSource s;
  s.type = TensorType::mixed12;
  s.origin = Origin::connection_difference;
  s.other = &other;
  return s;
}

double BaseLieDerivative::max_discrepancy() const {
  double d = 0.0;
  for (std::size_t k = 0; k < partial_form.size(); ++k) d = std::max(d, std::abs(partial_form[k] - covariant_form[k]));
  return d;
}

namespace {

template <class S>
std::vector<S> tensor_values(const TensorSource& src, const ManifoldSpec& spec, std::span<const S> x) {
  const int n = spec.dim();
  switch (src.origin) {
    case TensorSource::Origin::metric: {
      const Matrix<S> g = metric<S>(spec, x);
      return g.data();
    }
    case TensorSource::Origin::expressions:
      return eval_all<S>(src.exprs, x);
    case TensorSource::Origin::connection_difference: {
      const MetricJet<S> mine = metric_jet<S>(spec, x);
      const MetricJet<S> theirs = metric_jet<S>(*src.other, x);
      std::vector<S> out(static_cast<std::size_t>(n * n * n));
      for (std::size_t q = 0; q < out.size(); ++q) out[q] = theirs.gamma.data[q] - mine.gamma.data[q];
      return out;
    }
  }
  return {};
}

std::size_t tensor_size(TensorType t, int n) {
  return static_cast<std::size_t>(t == TensorType::mixed12 ? n * n * n : n * n);
}

}  // namespace

BaseLieDerivative base_lie_derivative(const BaseField& v, const TensorSource& src, const ManifoldSpec& spec,
                                      std::span<const double> p) {
  const int n = spec.dim();
  if (v.dim() != n || static_cast<int>(p.size()) != n) throw GeometryError("base_lie_derivative: dimension mismatch");
  if (src.origin == TensorSource::Origin::expressions && src.exprs.size() != tensor_size(src.type, n))
    throw GeometryError("base_lie_derivative: tensor expression count does not match type " + to_string(src.type));
  if (src.origin == TensorSource::Origin::connection_difference && (!src.other || src.other->dim() != n))
    throw GeometryError("base_lie_derivative: connection difference needs a manifold of the same dimension");
  if (src.origin == TensorSource::Origin::metric && src.type != TensorType::cov2)
    throw GeometryError("base_lie_derivative: metric tensor is of type (0,2)");

  const std::vector<double> Vv = eval_all<double>(v.components, p);
  const MatrixD dV = base_field_jacobian<double>(v.components, p);  // (a, h) = d_a V^h
  const MetricJet<double> jet = metric_jet<double>(spec, p);
  const Christoffel<double>& G = jet.gamma;

  const std::vector<double> S = tensor_values<double>(src, spec, p);
  // dS[a] = d_a S
  std::vector<std::vector<double>> dS(static_cast<std::size_t>(n));
  {
    std::vector<Dual<double>> xd = lift_point<double>(p);
    for (int a = 0; a < n; ++a) {
      xd[a].d = 1.0;
      const std::vector<Dual<double>> sd = tensor_values<Dual<double>>(src, spec, xd);
      xd[a].d = 0.0;
      dS[a].resize(sd.size());
      for (std::size_t q = 0; q < sd.size(); ++q) dS[a][q] = sd[q].d;
    }
  }

  MatrixD nablaV(n, n);  // (a, h) = nabla_a V^h
  for (int a = 0; a < n; ++a)
    for (int h = 0; h < n; ++h) {
      double acc = dV(a, h);
      for (int k = 0; k < n; ++k) acc += G(h, a, k) * Vv[k];
      nablaV(a, h) = acc;
    }

  BaseLieDerivative out;
  out.type = src.type;
  out.n = n;
  out.partial_form.assign(S.size(), 0.0);
  out.covariant_form.assign(S.size(), 0.0);

  switch (src.type) {
    case TensorType::cov2: {
      auto s = [&](int i, int j) { return S[static_cast<std::size_t>(i * n + j)]; };
      auto ds = [&](int a, int i, int j) { return dS[a][static_cast<std::size_t>(i * n + j)]; };
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double pf = 0.0;
          double cf = 0.0;
          for (int a = 0; a < n; ++a) {
            pf += Vv[a] * ds(a, i, j) + dV(i, a) * s(a, j) + dV(j, a) * s(i, a);
            double cov = ds(a, i, j);
            for (int k = 0; k < n; ++k) cov -= G(k, a, i) * s(k, j) + G(k, a, j) * s(i, k);
            cf += Vv[a] * cov + s(a, j) * nablaV(i, a) + s(i, a) * nablaV(j, a);
          }
          out.partial_form[static_cast<std::size_t>(i * n + j)] = pf;
          out.covariant_form[static_cast<std::size_t>(i * n + j)] = cf;
        }
      break;
    }
    case TensorType::mixed11: {
      auto s = [&](int h, int i) { return S[static_cast<std::size_t>(h * n + i)]; };
      auto ds = [&](int a, int h, int i) { return dS[a][static_cast<std::size_t>(h * n + i)]; };
      for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i) {
          double pf = 0.0;
          double cf = 0.0;
          for (int a = 0; a < n; ++a) {
            pf += Vv[a] * ds(a, h, i) + dV(i, a) * s(h, a) - dV(a, h) * s(a, i);
            double cov = ds(a, h, i);
            for (int k = 0; k < n; ++k) cov += G(h, a, k) * s(k, i) - G(k, a, i) * s(h, k);
            cf += Vv[a] * cov + s(h, a) * nablaV(i, a) - s(a, i) * nablaV(a, h);
          }
          out.partial_form[static_cast<std::size_t>(h * n + i)] = pf;
          out.covariant_form[static_cast<std::size_t>(h * n + i)] = cf;
        }
      break;
    }
    case TensorType::mixed12: {
      // s(h, j, i) = S_j^h_i
      auto s = [&](int h, int j, int i) { return S[static_cast<std::size_t>((h * n + j) * n + i)]; };
      auto ds = [&](int a, int h, int j, int i) { return dS[a][static_cast<std::size_t>((h * n + j) * n + i)]; };
      for (int h = 0; h < n; ++h)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) {
            double pf = 0.0;
            double cf = 0.0;
            for (int a = 0; a < n; ++a) {
              pf += Vv[a] * ds(a, h, j, i) + dV(j, a) * s(h, a, i) + dV(i, a) * s(h, j, a) - dV(a, h) * s(a, j, i);
              double cov = ds(a, h, j, i);
              for (int k = 0; k < n; ++k)
                cov += G(h, a, k) * s(k, j, i) - G(k, a, j) * s(h, k, i) - G(k, a, i) * s(h, j, k);
              // v^a nabla_a S - S_j^a_i nabla_a v^h + S_a^h_i nabla_j v^a + S_j^h_a nabla_i v^a
              cf += Vv[a] * cov - s(a, j, i) * nablaV(a, h) + s(h, a, i) * nablaV(j, a) + s(h, j, a) * nablaV(i, a);
            }
            out.partial_form[static_cast<std::size_t>((h * n + j) * n + i)] = pf;
            out.covariant_form[static_cast<std::size_t>((h * n + j) * n + i)] = cf;
          }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brackets

namespace {

void check_slot(const ManifoldSpec& spec, FrameSlot s) {
  if (s.index < 0 || s.index >= spec.dim()) throw GeometryError("frame slot index out of range");
}

MatrixD frame_at(const ManifoldSpec& spec, std::span<const double> z) {
  const int n = spec.dim();
  std::span<const double> x = z.subspan(0, static_cast<std::size_t>(n));
  std::span<const double> y = z.subspan(static_cast<std::size_t>(n));
  const MetricJet<double> jet = metric_jet<double>(spec, x);
  return frame_matrix(connection_coefficients<double>(jet.gamma, y));
}

int row_of(const ManifoldSpec& spec, FrameSlot s) { return s.bar ? spec.dim() + s.index : s.index; }

}  // namespace

std::vector<double> adapted_bracket(const ManifoldSpec& spec, const TMPoint& p, FrameSlot s1, FrameSlot s2) {
  check_slot(spec, s1);
  check_slot(spec, s2);
  const int n = spec.dim();
  std::vector<double> out(static_cast<std::size_t>(2 * n), 0.0);
  if (s1.bar && s2.bar) return out;
  if (!s1.bar && !s2.bar) {
    // [X_i, X_j] = y^r K_{jir}^m X_mbar
    const ConnectionJet<double> cj = connection_jet<double>(spec, p.x);
    const int i = s1.index;
    const int j = s2.index;
    for (int m = 0; m < n; ++m) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r) acc += p.y[r] * cj.curvature(j, i, r, m);
      out[n + m] = acc;
    }
    return out;
  }
  // [X_i, X_jbar] = Gamma^m_{ji} X_mbar, antisymmetric in the slots
  const MetricJet<double> jet = metric_jet<double>(spec, p.x);
  const double sign = s1.bar ? -1.0 : 1.0;
  const int i = s1.bar ? s2.index : s1.index;
  const int j = s1.bar ? s1.index : s2.index;
  for (int m = 0; m < n; ++m) out[n + m] = sign * jet.gamma(m, j, i);
  return out;
}

std::vector<double> numeric_bracket(const ManifoldSpec& spec, const TMPoint& p, FrameSlot s1, FrameSlot s2,
                                    double step) {
  check_slot(spec, s1);
  check_slot(spec, s2);
  const int n = spec.dim();
  const int dim = 2 * n;
  const std::vector<double> z = p.coords();
  const MatrixD F0 = frame_at(spec, z);
  const int r1 = row_of(spec, s1);
  const int r2 = row_of(spec, s2);

  // dF[nu](row, mu) = d/dz^nu of frame(row, mu)
  std::vector<MatrixD> dF;
  dF.reserve(static_cast<std::size_t>(dim));
  std::vector<double> zp = z;
  std::vector<double> zm = z;
  for (int nu = 0; nu < dim; ++nu) {
    zp[nu] = z[nu] + step;
    zm[nu] = z[nu] - step;
    MatrixD d = frame_at(spec, zp) - frame_at(spec, zm);
    d *= 1.0 / (2.0 * step);
    dF.push_back(std::move(d));
    zp[nu] = z[nu];
    zm[nu] = z[nu];
  }
  std::vector<double> w(static_cast<std::size_t>(dim), 0.0);
  for (int mu = 0; mu < dim; ++mu) {
    double acc = 0.0;
    for (int nu = 0; nu < dim; ++nu) acc += F0(r1, nu) * dF[nu](r2, mu) - F0(r2, nu) * dF[nu](r1, mu);
    w[mu] = acc;
  }
  const AdaptedFrame af = adapted_frame(spec, p);
  return af.coframe * w;
}

// ---------------------------------------------------------------------------
// TM

double LieFrameValue::duality_defect() const {
  const int dim = frame.rows();
  double d = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) d = std::max(d, std::abs(coframe(a, b) + frame(b, a)));
  return d;
}

LieFrameValue lie_frame(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p) {
  const int n = spec.dim();
  const LieTerms<double> t = lie_terms<double>(x, spec, p.x, p.y);
  LieFrameValue v;
  v.point = p;
  v.frame = MatrixD(2 * n, 2 * n);
  v.coframe = MatrixD(2 * n, 2 * n);
  for (int h = 0; h < n; ++h)
    for (int a = 0; a < n; ++a) {
      v.frame(h, a) = -t.dx_horiz(h, a);
      v.frame(h, n + a) = t.bracket(h, a);
      v.frame(n + h, n + a) = t.vbracket(h, a);
    }
  for (int h = 0; h < n; ++h)
    for (int m = 0; m < n; ++m) {
      v.coframe(h, m) = t.dx_horiz(m, h);
      v.coframe(n + h, m) = -t.bracket(m, h);
      v.coframe(n + h, n + m) = -t.vbracket(m, h);
    }
  return v;
}

namespace {

BilinearFormValue wrap(const TMPoint& p, MatrixD m) {
  BilinearFormValue v;
  v.point = p;
  const double norm = frobenius_norm(m);
  v.symmetric = frobenius_norm(m - m.transpose()) <= 1e-10 * std::max(norm, 1e-300) || norm == 0.0;
  v.matrix = std::move(m);
  v.basis = Basis::adapted;
  return v;
}

}  // namespace

BilinearFormValue lie_g1(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p) {
  return wrap(p, assemble_lie_g1(lie_terms<double>(x, spec, p.x, p.y)));
}

BilinearFormValue lie_g2(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p) {
  return wrap(p, assemble_lie_g2(lie_terms<double>(x, spec, p.x, p.y)));
}

BilinearFormValue lie_g3(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p) {
  return wrap(p, assemble_lie_g3(lie_terms<double>(x, spec, p.x, p.y)));
}

BilinearFormValue lie_gtilde(const LiftField& x, const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                             const TMPoint& p, const ClosedFormOptions& opt) {
  return wrap(p, assemble_lie_gtilde(lie_terms<double>(x, spec, p.x, p.y), coeffs, opt));
}

BilinearFormValue to_coordinate_basis(const BilinearFormValue& v, const ManifoldSpec& spec) {
  if (v.basis == Basis::coordinate) return v;
  const AdaptedFrame f = adapted_frame(spec, v.point);
  BilinearFormValue out = v;
  out.matrix = f.coframe.transpose() * v.matrix * f.coframe;
  out.basis = Basis::coordinate;
  return out;
}

}  // namespace liftlab
