#pragma once

// Vector fields on TM in adapted components (X^h, X^hbar):
//   complete   X^C = V^h X_h + y^m (Gamma^h_{ma} V^a + d_m V^h) X_hbar
//   horizontal X^H = V^h X_h
//   vertical   X^V = V^h X_hbar
//   affine     X   = X^h(x) X_h + (alpha^m_a(x) y^a + beta^m(x)) X_mbar
// plus a `general` kind whose horizontal part may depend on y (negative tests only).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liftlab/tangent_bundle.hpp"

namespace liftlab {

enum class LiftKind { complete, horizontal, vertical, fiber_preserving, general };

std::string to_string(LiftKind k);
LiftKind lift_kind_from_string(const std::string& s);

enum class KnownClass { none, killing, homothetic, conformal };

struct BaseField {
  std::string name;
  std::vector<Expr> components;  // V^h over x1..xn
  KnownClass known_class = KnownClass::none;
  double rho = 0.0;  // homothety constant when known_class == homothetic

  int dim() const { return static_cast<int>(components.size()); }
  static BaseField from_text(std::string name, const std::vector<std::string>& text, int dim,
                             KnownClass known = KnownClass::none, double rho = 0.0);
};

struct AffineFiberField {
  std::vector<Expr> alpha;  // row-major alpha(m, a) = alpha^m_a, over x1..xn
  std::vector<Expr> beta;   // beta^m
  std::vector<Expr> horiz;  // X^h

  static AffineFiberField from_text(const std::vector<std::vector<std::string>>& alpha,
                                    const std::vector<std::string>& beta, const std::vector<std::string>& horiz,
                                    int dim);
};

template <class S>
struct LiftComponents {
  std::vector<S> horiz;
  std::vector<S> vert;
};

class LiftField {
 public:
  LiftField() = default;

  LiftKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::optional<BaseField>& base() const { return base_; }
  const std::optional<AffineFiberField>& affine() const { return affine_; }

  /// Adapted components at (x, y).
  template <class S>
  LiftComponents<S> components(const ManifoldSpec& spec, std::span<const S> x, std::span<const S> y) const;

  friend LiftField complete_lift(const BaseField& v, const ManifoldSpec& spec);
  friend LiftField horizontal_lift(const BaseField& v, const ManifoldSpec& spec);
  friend LiftField vertical_lift(const BaseField& v, const ManifoldSpec& spec);
  friend LiftField affine_fiber_field(const ManifoldSpec& spec, const AffineFiberField& f);
  friend LiftField general_field(const ManifoldSpec& spec, const std::vector<std::string>& horiz,
                                 const std::vector<std::string>& vert);

 private:
  LiftKind kind_ = LiftKind::general;
  int dim_ = 0;
  std::string name_;
  std::optional<BaseField> base_;
  std::optional<AffineFiberField> affine_;
  std::vector<Expr> horiz_xy_;  // general kind, over x1..xn,y1..yn
  std::vector<Expr> vert_xy_;
};

LiftField complete_lift(const BaseField& v, const ManifoldSpec& spec);
LiftField horizontal_lift(const BaseField& v, const ManifoldSpec& spec);
LiftField vertical_lift(const BaseField& v, const ManifoldSpec& spec);
LiftField affine_fiber_field(const ManifoldSpec& spec, const AffineFiberField& f);
LiftField general_field(const ManifoldSpec& spec, const std::vector<std::string>& horiz,
                        const std::vector<std::string>& vert);

/// A^m_a = Gamma^m_{ah} V^h + d_a V^m: the fiber-linear coefficient of the complete lift.
MatrixD complete_lift_alpha(const BaseField& v, const ManifoldSpec& spec, std::span<const double> x);

/// Components in the coordinate frame (d/dx, d/dy): transpose(frame) * adapted.
std::vector<double> coordinate_components(const LiftField& field, const ManifoldSpec& spec, const TMPoint& p);

/// Adapted components as a 2n vector (horizontal first).
std::vector<double> adapted_components(const LiftField& field, const ManifoldSpec& spec, const TMPoint& p);

// ---------------------------------------------------------------------------

template <class S>
std::vector<S> eval_all(const std::vector<Expr>& exprs, std::span<const S> vars) {
  std::vector<S> out;
  out.reserve(exprs.size());
  for (const Expr& e : exprs) out.push_back(e.template eval<S>(vars));
  return out;
}

/// dV(m, h) = d_m V^h
template <class S>
Matrix<S> base_field_jacobian(const std::vector<Expr>& v, std::span<const S> x) {
  const int n = static_cast<int>(x.size());
  Matrix<S> dV(n, n);
  std::vector<Dual<S>> xd = lift_point<S>(x);
  for (int m = 0; m < n; ++m) {
    xd[m].d = S(1.0);
    for (int h = 0; h < n; ++h) dV(m, h) = v[h].template eval<Dual<S>>(xd).d;
    xd[m].d = S(0.0);
  }
  return dV;
}

template <class S>
LiftComponents<S> LiftField::components(const ManifoldSpec& spec, std::span<const S> x,
                                        std::span<const S> y) const {
  const int n = dim_;
  LiftComponents<S> c;
  c.horiz.assign(static_cast<std::size_t>(n), S(0.0));
  c.vert.assign(static_cast<std::size_t>(n), S(0.0));
  switch (kind_) {
    case LiftKind::complete: {
      const std::vector<S> V = eval_all<S>(base_->components, x);
      const Matrix<S> dV = base_field_jacobian<S>(base_->components, x);
      const MetricJet<S> jet = metric_jet<S>(spec, x);
      c.horiz = V;
      for (int h = 0; h < n; ++h) {
        S acc(0.0);
        for (int m = 0; m < n; ++m) {
          S inner = dV(m, h);
          for (int a = 0; a < n; ++a) inner += jet.gamma(h, m, a) * V[a];
          acc += y[m] * inner;
        }
        c.vert[h] = acc;
      }
      break;
    }
    case LiftKind::horizontal:
      c.horiz = eval_all<S>(base_->components, x);
      break;
    case LiftKind::vertical:
      c.vert = eval_all<S>(base_->components, x);
      break;
    case LiftKind::fiber_preserving: {
      c.horiz = eval_all<S>(affine_->horiz, x);
      for (int m = 0; m < n; ++m) {
        S acc = affine_->beta[m].template eval<S>(x);
        for (int a = 0; a < n; ++a)
          acc += affine_->alpha[static_cast<std::size_t>(m * n + a)].template eval<S>(x) * y[a];
        c.vert[m] = acc;
      }
      break;
    }
    case LiftKind::general: {
      std::vector<S> z(x.begin(), x.end());
      z.insert(z.end(), y.begin(), y.end());
      c.horiz = eval_all<S>(horiz_xy_, std::span<const S>(z));
      c.vert = eval_all<S>(vert_xy_, std::span<const S>(z));
      break;
    }
  }
  return c;
}

/// Components and their first partial derivatives at one point.
template <class S>
struct LiftJet {
  LiftComponents<S> value;
  Matrix<S> dx_horiz;  // (i, m) = d_i X^m
  Matrix<S> dx_vert;   // (i, m) = d_i X^mbar
  Matrix<S> dy_horiz;  // (i, m) = d/dy^i X^m
  Matrix<S> dy_vert;   // (i, m) = d/dy^i X^mbar
};

template <class S>
LiftJet<S> lift_jet(const LiftField& field, const ManifoldSpec& spec, std::span<const S> x, std::span<const S> y) {
  const int n = field.dim();
  LiftJet<S> jet;
  jet.dx_horiz = Matrix<S>(n, n);
  jet.dx_vert = Matrix<S>(n, n);
  jet.dy_horiz = Matrix<S>(n, n);
  jet.dy_vert = Matrix<S>(n, n);
  std::vector<Dual<S>> xd = lift_point<S>(x);
  std::vector<Dual<S>> yd = lift_point<S>(y);
  for (int i = 0; i < n; ++i) {
    xd[i].d = S(1.0);
    const LiftComponents<Dual<S>> c = field.components<Dual<S>>(spec, xd, yd);
    xd[i].d = S(0.0);
    if (i == 0) {
      jet.value.horiz.resize(static_cast<std::size_t>(n));
      jet.value.vert.resize(static_cast<std::size_t>(n));
      for (int m = 0; m < n; ++m) {
        jet.value.horiz[m] = c.horiz[m].v;
        jet.value.vert[m] = c.vert[m].v;
      }
    }
    for (int m = 0; m < n; ++m) {
      jet.dx_horiz(i, m) = c.horiz[m].d;
      jet.dx_vert(i, m) = c.vert[m].d;
    }
  }
  for (int i = 0; i < n; ++i) {
    yd[i].d = S(1.0);
    const LiftComponents<Dual<S>> c = field.components<Dual<S>>(spec, xd, yd);
    yd[i].d = S(0.0);
    for (int m = 0; m < n; ++m) {
      jet.dy_horiz(i, m) = c.horiz[m].d;
      jet.dy_vert(i, m) = c.vert[m].d;
    }
  }
  return jet;
}

/// Coordinate components Z = (X^h, X^mbar - N_h^m X^h).
template <class S>
std::vector<S> coordinate_components(const LiftField& field, const ManifoldSpec& spec, std::span<const S> x,
                                     std::span<const S> y) {
  const int n = field.dim();
  const LiftComponents<S> c = field.components<S>(spec, x, y);
  const MetricJet<S> jet = metric_jet<S>(spec, x);
  const Matrix<S> N = connection_coefficients<S>(jet.gamma, y);
  std::vector<S> z(static_cast<std::size_t>(2 * n), S(0.0));
  for (int h = 0; h < n; ++h) z[h] = c.horiz[h];
  for (int m = 0; m < n; ++m) {
    S acc = c.vert[m];
    for (int h = 0; h < n; ++h) acc -= N(h, m) * c.horiz[h];
    z[n + m] = acc;
  }
  return z;
}

}  // namespace liftlab
