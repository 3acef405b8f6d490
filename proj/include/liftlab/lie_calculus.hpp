#pragma once

// Closed-form Lie derivatives on M and on TM.
//
// For a fiber-preserving X = X^h X_h + X^hbar X_hbar the bracket coefficients are
//   B_h^a = y^b X^c K_{hcb}^a - X^bbar Gamma^a_{bh} - X_h(X^abar)      (curvature, gamma, frame terms)
//   C_h^a = X^b Gamma^a_{bh} - X_hbar(X^abar)
// and
//   L_X X_h    = -(d_h X^a) X_a + B_h^a X_abar
//   L_X X_hbar =  C_h^a X_abar
//   L_X dx^h   =  (d_m X^h) dx^m
//   L_X dy^h   = -B_m^h dx^m - C_m^h dy^m        (dy meaning the adapted coframe delta y)
//
// Symmetric products follow dx^i dy^j = (dx^i (x) dy^j + dy^j (x) dx^i) / 2, which is the
// convention under which g2 = 2 g_ij dx^i dy^j has adapted blocks [[0, g], [g, 0]].

#include <span>
#include <string>
#include <vector>

#include "liftlab/lift_fields.hpp"

namespace liftlab {

struct ClosedFormOptions {
  /// Fault injection: flip the sign of the X_ibar(X^mbar) terms in the g2/g3 formulas.
  bool perturb = false;
};

enum class Basis { adapted, coordinate };

struct BilinearFormValue {
  TMPoint point;
  MatrixD matrix;
  Basis basis = Basis::adapted;
  bool symmetric = true;
};

/// Individually inspectable summands of the frame and metric Lie derivatives at one point.
template <class S>
struct LieTerms {
  int n = 0;
  Matrix<S> g;
  Matrix<S> lie_v_g;         // (i, j) = (L_V g)_ij, V the induced base field
  Matrix<S> nabla_x;         // (i, m) = nabla_i X^m
  Matrix<S> dx_horiz;        // (h, a) = d_h X^a
  Matrix<S> curvature_term;  // (h, a) = y^b X^c K_{hcb}^a
  Matrix<S> gamma_term;      // (h, a) = X^bbar Gamma^a_{bh}
  Matrix<S> frame_term;      // (h, a) = X_h(X^abar)
  Matrix<S> vgamma_term;     // (h, a) = X^b Gamma^a_{bh}
  Matrix<S> vframe_term;     // (h, a) = X_hbar(X^abar)

  S bracket(int h, int a) const { return curvature_term(h, a) - gamma_term(h, a) - frame_term(h, a); }
  S vbracket(int h, int a) const { return vgamma_term(h, a) - vframe_term(h, a); }
};

void require_fiber_preserving(const LiftField& field);

template <class S>
LieTerms<S> lie_terms(const LiftField& field, const ManifoldSpec& spec, std::span<const S> x,
                      std::span<const S> y) {
  require_fiber_preserving(field);
  const int n = spec.dim();
  const ConnectionJet<S> cj = connection_jet<S>(spec, x);
  const Christoffel<S>& G = cj.metric.gamma;
  const Curvature<S>& K = cj.curvature;
  const LiftJet<S> lj = lift_jet<S>(field, spec, x, y);
  const Matrix<S> N = connection_coefficients<S>(G, y);
  const std::vector<S>& Xh = lj.value.horiz;
  const std::vector<S>& Xv = lj.value.vert;

  LieTerms<S> t;
  t.n = n;
  t.g = cj.metric.g;
  t.lie_v_g = Matrix<S>(n, n);
  t.nabla_x = Matrix<S>(n, n);
  t.dx_horiz = lj.dx_horiz;
  t.curvature_term = Matrix<S>(n, n);
  t.gamma_term = Matrix<S>(n, n);
  t.frame_term = Matrix<S>(n, n);
  t.vgamma_term = Matrix<S>(n, n);
  t.vframe_term = lj.dy_vert;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S acc(0.0);
      for (int a = 0; a < n; ++a)
        acc += Xh[a] * cj.metric.dg[a](i, j) + lj.dx_horiz(i, a) * t.g(a, j) + lj.dx_horiz(j, a) * t.g(i, a);
      t.lie_v_g(i, j) = acc;
    }
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) {
      S acc = lj.dx_horiz(i, m);
      for (int a = 0; a < n; ++a) acc += G(m, i, a) * Xh[a];
      t.nabla_x(i, m) = acc;
    }
  for (int h = 0; h < n; ++h)
    for (int a = 0; a < n; ++a) {
      S curv(0.0);
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) curv += y[b] * Xh[c] * K(h, c, b, a);
      t.curvature_term(h, a) = curv;

      S gam(0.0);
      S vgam(0.0);
      for (int b = 0; b < n; ++b) {
        gam += Xv[b] * G(a, b, h);
        vgam += Xh[b] * G(a, b, h);
      }
      t.gamma_term(h, a) = gam;
      t.vgamma_term(h, a) = vgam;

      // X_h = d_h - N_h^k d/dy^k
      S fr = lj.dx_vert(h, a);
      for (int k = 0; k < n; ++k) fr -= N(h, k) * lj.dy_vert(k, a);
      t.frame_term(h, a) = fr;
    }
  return t;
}

/// L_X g1 = (L_V g_ij) dx^i dx^j
template <class S>
Matrix<S> assemble_lie_g1(const LieTerms<S>& t) {
  const int n = t.n;
  Matrix<S> M(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = S(0.5) * (t.lie_v_g(i, j) + t.lie_v_g(j, i));
  return M;
}

/// L_X g2 = 2[ -g_jm B_i^m dx^i dx^j + {L_V g_ij - g_jm nabla_i X^m + g_jm X_ibar(X^mbar)} dx^j dy^i ]
template <class S>
Matrix<S> assemble_lie_g2(const LieTerms<S>& t, const ClosedFormOptions& opt = {}) {
  const int n = t.n;
  const S sgn(opt.perturb ? -1.0 : 1.0);
  Matrix<S> M(2 * n, 2 * n);
  Matrix<S> T(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S acc(0.0);
      for (int m = 0; m < n; ++m) acc -= t.g(j, m) * t.bracket(i, m);
      T(i, j) = acc;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = T(i, j) + T(j, i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S u = t.lie_v_g(i, j);
      for (int m = 0; m < n; ++m) u += t.g(j, m) * (sgn * t.vframe_term(i, m) - t.nabla_x(i, m));
      M(j, n + i) = u;
      M(n + i, j) = u;
    }
  return M;
}

/// L_X g3 = -2 g_mi B_j^m dx^j dy^i + {L_V g_ij - 2 g_mj nabla_i X^m + 2 g_mj X_ibar(X^mbar)} dy^i dy^j
template <class S>
Matrix<S> assemble_lie_g3(const LieTerms<S>& t, const ClosedFormOptions& opt = {}) {
  const int n = t.n;
  const S sgn(opt.perturb ? -1.0 : 1.0);
  Matrix<S> M(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      S acc(0.0);
      for (int m = 0; m < n; ++m) acc -= t.g(m, i) * t.bracket(j, m);
      M(j, n + i) = acc;
      M(n + i, j) = acc;
    }
  Matrix<S> T(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S acc = t.lie_v_g(i, j);
      for (int m = 0; m < n; ++m)
        acc += S(2.0) * t.g(m, j) * (sgn * t.vframe_term(i, m) - t.nabla_x(i, m));
      T(i, j) = acc;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(n + i, n + j) = S(0.5) * (T(i, j) + T(j, i));
  return M;
}

template <class S>
Matrix<S> assemble_lie_gtilde(const LieTerms<S>& t, const LiftMetricCoeffs& c, const ClosedFormOptions& opt = {}) {
  Matrix<S> M = S(c.a) * assemble_lie_g1(t);
  if (c.b != 0.0) M += S(c.b) * assemble_lie_g2(t, opt);
  if (c.c != 0.0) M += S(c.c) * assemble_lie_g3(t, opt);
  return M;
}

/// Omega = trace(gt^{-1} L) / (4n) in the adapted basis.
template <class S>
S conformal_factor(const LieTerms<S>& t, const LiftMetricCoeffs& c, const ClosedFormOptions& opt = {}) {
  const Matrix<S> L = assemble_lie_gtilde(t, c, opt);
  const Matrix<S> A = lift_metric_blocks(t.g, c);
  const Matrix<S> Ainv = inverse(A);
  const int dim = A.rows();
  S tr(0.0);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) tr += Ainv(i, k) * L(k, i);
  return tr / S(2.0 * dim);
}

// ---------------------------------------------------------------------------
// Base-manifold Lie derivative

enum class TensorType { cov2, mixed11, mixed12 };

std::string to_string(TensorType t);

/// A tensor field on M. Layouts: cov2 (i, j) -> S_ij; mixed11 (h, i) -> S^h_i;
/// mixed12 (h, j, i) -> S_j^h_i (same layout as Christoffel(k, i, j)).
struct TensorSource {
  enum class Origin { metric, expressions, connection_difference };

  TensorType type = TensorType::cov2;
  Origin origin = Origin::metric;
  std::vector<Expr> exprs;
  const ManifoldSpec* other = nullptr;  // connection_difference: Gamma(other) - Gamma(spec)

  static TensorSource metric_tensor();
  static TensorSource cov2_exprs(std::vector<Expr> e);
  static TensorSource mixed11_exprs(std::vector<Expr> e);
  static TensorSource connection_difference(const ManifoldSpec& other);
};

struct BaseLieDerivative {
  TensorType type = TensorType::cov2;
  int n = 0;
  std::vector<double> partial_form;
  std::vector<double> covariant_form;

  double max_discrepancy() const;
};

BaseLieDerivative base_lie_derivative(const BaseField& v, const TensorSource& s, const ManifoldSpec& spec,
                                      std::span<const double> p);

// ---------------------------------------------------------------------------
// Adapted-frame brackets

struct FrameSlot {
  int index = 0;
  bool bar = false;  // true: X_ibar = d/dy^i
};

/// Closed form, adapted components (2n).
std::vector<double> adapted_bracket(const ManifoldSpec& spec, const TMPoint& p, FrameSlot s1, FrameSlot s2);

/// Central-difference commutator of the frame fields, converted to adapted components.
std::vector<double> numeric_bracket(const ManifoldSpec& spec, const TMPoint& p, FrameSlot s1, FrameSlot s2,
                                    double step = 1e-5);

// ---------------------------------------------------------------------------
// Lie derivatives on TM

struct LieFrameValue {
  TMPoint point;
  MatrixD frame;    // row a: L_X of the a-th adapted frame vector, adapted components
  MatrixD coframe;  // row a: L_X of the a-th adapted coframe covector, adapted components

  /// max |<L w^a, e_b> + <w^a, L e_b>|
  double duality_defect() const;
};

LieFrameValue lie_frame(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p);

BilinearFormValue lie_g1(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p);
BilinearFormValue lie_g2(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p);
BilinearFormValue lie_g3(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p);
BilinearFormValue lie_gtilde(const LiftField& x, const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                             const TMPoint& p, const ClosedFormOptions& opt = {});

/// Adapted-basis form to coordinate basis: coframe^T * M * coframe.
BilinearFormValue to_coordinate_basis(const BilinearFormValue& v, const ManifoldSpec& spec);

}  // namespace liftlab
