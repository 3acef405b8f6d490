#include "liftlab/lift_fields.hpp"

namespace liftlab {

std::string to_string(LiftKind k) {
  switch (k) {
    case LiftKind::complete: return "complete";
    case LiftKind::horizontal: return "horizontal";
    case LiftKind::vertical: return "vertical";
    case LiftKind::fiber_preserving: return "fiber_preserving";
    case LiftKind::general: return "general";
  }
  return "general";
}

LiftKind lift_kind_from_string(const std::string& s) {
  if (s == "complete") return LiftKind::complete;
  if (s == "horizontal") return LiftKind::horizontal;
  if (s == "vertical") return LiftKind::vertical;
  if (s == "fiber_preserving") return LiftKind::fiber_preserving;
  if (s == "general") return LiftKind::general;
  throw ConfigError("unknown field kind '" + s + "'");
}

BaseField BaseField::from_text(std::string name, const std::vector<std::string>& text, int dim, KnownClass known,
                               double rho) {
  if (static_cast<int>(text.size()) != dim)
    throw GeometryError("base field '" + name + "' needs " + std::to_string(dim) + " components");
  BaseField f;
  f.name = std::move(name);
  f.known_class = known;
  f.rho = rho;
  for (const auto& t : text) f.components.push_back(parse(t, dim));
  return f;
}

AffineFiberField AffineFiberField::from_text(const std::vector<std::vector<std::string>>& alpha,
                                             const std::vector<std::string>& beta,
                                             const std::vector<std::string>& horiz, int dim) {
  if (static_cast<int>(alpha.size()) != dim || static_cast<int>(beta.size()) != dim ||
      static_cast<int>(horiz.size()) != dim)
    throw GeometryError("affine fiber field: alpha must be n x n, beta and horiz of length n");
  AffineFiberField f;
  for (const auto& row : alpha) {
    if (static_cast<int>(row.size()) != dim) throw GeometryError("affine fiber field: alpha must be n x n");
    for (const auto& t : row) f.alpha.push_back(parse(t, dim));
  }
  for (const auto& t : beta) f.beta.push_back(parse(t, dim));
  for (const auto& t : horiz) f.horiz.push_back(parse(t, dim));
  return f;
}

namespace {

void check_base(const BaseField& v, const ManifoldSpec& spec) {
  if (v.dim() != spec.dim())
    throw GeometryError("field '" + v.name + "' has " + std::to_string(v.dim()) + " components, manifold '" +
                        spec.name() + "' has dimension " + std::to_string(spec.dim()));
  for (const Expr& e : v.components)
    if (e.dim() != spec.dim()) throw GeometryError("field '" + v.name + "' expressions use the wrong chart");
}

}  // namespace

LiftField complete_lift(const BaseField& v, const ManifoldSpec& spec) {
  check_base(v, spec);
  LiftField f;
  f.kind_ = LiftKind::complete;
  f.dim_ = spec.dim();
  f.name_ = v.name + "^C";
  f.base_ = v;
  return f;
}

LiftField horizontal_lift(const BaseField& v, const ManifoldSpec& spec) {
  check_base(v, spec);
  LiftField f;
  f.kind_ = LiftKind::horizontal;
  f.dim_ = spec.dim();
  f.name_ = v.name + "^H";
  f.base_ = v;
  return f;
}

LiftField vertical_lift(const BaseField& v, const ManifoldSpec& spec) {
  check_base(v, spec);
  LiftField f;
  f.kind_ = LiftKind::vertical;
  f.dim_ = spec.dim();
  f.name_ = v.name + "^V";
  f.base_ = v;
  return f;
}

LiftField affine_fiber_field(const ManifoldSpec& spec, const AffineFiberField& a) {
  const int n = spec.dim();
  if (static_cast<int>(a.alpha.size()) != n * n || static_cast<int>(a.beta.size()) != n ||
      static_cast<int>(a.horiz.size()) != n)
    throw GeometryError("affine fiber field shape does not match manifold dimension");
  auto check = [n](const std::vector<Expr>& es) {
    for (const Expr& e : es)
      if (e.dim() != n) throw GeometryError("affine fiber field expressions must be over x1..xn");
  };
  check(a.alpha);
  check(a.beta);
  check(a.horiz);
  LiftField f;
  f.kind_ = LiftKind::fiber_preserving;
  f.dim_ = n;
  f.name_ = "affine";
  f.affine_ = a;
  return f;
}

LiftField general_field(const ManifoldSpec& spec, const std::vector<std::string>& horiz,
                        const std::vector<std::string>& vert) {
  const int n = spec.dim();
  if (static_cast<int>(horiz.size()) != n || static_cast<int>(vert.size()) != n)
    throw GeometryError("general field needs n horizontal and n vertical components");
  auto names = bundle_names(n);
  LiftField f;
  f.kind_ = LiftKind::general;
  f.dim_ = n;
  f.name_ = "general";
  for (const auto& t : horiz) f.horiz_xy_.push_back(parse(t, names));
  for (const auto& t : vert) f.vert_xy_.push_back(parse(t, names));
  return f;
}

MatrixD complete_lift_alpha(const BaseField& v, const ManifoldSpec& spec, std::span<const double> x) {
  check_base(v, spec);
  const int n = spec.dim();
  const std::vector<double> V = eval_all<double>(v.components, x);
  const MatrixD dV = base_field_jacobian<double>(v.components, x);
  const MetricJet<double> jet = metric_jet<double>(spec, x);
  MatrixD A(n, n);  // A(m, a) = A^m_a
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a) {
      double acc = dV(a, m);
      for (int h = 0; h < n; ++h) acc += jet.gamma(m, a, h) * V[h];
      A(m, a) = acc;
    }
  return A;
}

std::vector<double> adapted_components(const LiftField& field, const ManifoldSpec& spec, const TMPoint& p) {
  const LiftComponents<double> c = field.components<double>(spec, p.x, p.y);
  std::vector<double> v(c.horiz);
  v.insert(v.end(), c.vert.begin(), c.vert.end());
  return v;
}

std::vector<double> coordinate_components(const LiftField& field, const ManifoldSpec& spec, const TMPoint& p) {
  if (p.dim() != spec.dim() || field.dim() != spec.dim()) throw GeometryError("dimension mismatch");
  const AdaptedFrame f = adapted_frame(spec, p);
  return f.frame.transpose() * adapted_components(field, spec, p);
}

}  // namespace liftlab
