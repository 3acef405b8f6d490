#include "liftlab/catalog.hpp"

#include <charconv>
#include <cstdio>
#include <numbers>

namespace liftlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> catalog_manifold_names() {
  return {"euclidean1", "euclidean2", "euclidean3", "polar2", "sphere2", "halfplane2", "torus_flat2"};
}

ManifoldSpec catalog_manifold(const std::string& name, double radius) {
  if (name.rfind("euclidean", 0) == 0 && name.size() > 9) {
    int n = 0;
    const char* first = name.data() + 9;
    const char* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec != std::errc() || ptr != last || n < 1) throw ConfigError("unknown catalog manifold '" + name + "'");
    std::vector<std::vector<std::string>> g(static_cast<std::size_t>(n), std::vector<std::string>(n, "0"));
    for (int i = 0; i < n; ++i) g[i][i] = "1";
    return ManifoldSpec::from_text(name, g, DomainBox{std::vector<double>(n, -2.0), std::vector<double>(n, 2.0)});
  }
  if (name == "polar2")
    return ManifoldSpec::from_text(name, {{"1", "0"}, {"0", "x1^2"}}, DomainBox{{0.5, -kPi}, {3.0, kPi}});
  if (name == "sphere2") {
    if (!(radius > 0.0)) throw ConfigError("sphere2 radius must be positive");
    const std::string r2 = num(radius * radius);
    return ManifoldSpec::from_text(name, {{r2, "0"}, {"0", r2 + "*sin(x1)^2"}},
                                   DomainBox{{0.1, -kPi}, {kPi - 0.1, kPi}});
  }
  if (name == "halfplane2")
    return ManifoldSpec::from_text(name, {{"1/x2^2", "0"}, {"0", "1/x2^2"}}, DomainBox{{-2.0, 0.5}, {2.0, 3.0}});
  if (name == "torus_flat2")
    return ManifoldSpec::from_text(name, {{"1", "0"}, {"0", "1"}}, DomainBox{{0.0, 0.0}, {2.0 * kPi, 2.0 * kPi}});
  throw ConfigError("unknown catalog manifold '" + name + "'");
}

const std::vector<CatalogField>& catalog_fields() {
  static const std::vector<CatalogField> fields = {
      {"euclidean1", "translation", {"1"}, KnownClass::killing, 0.0, "constant field"},
      {"euclidean1", "dilation", {"x1"}, KnownClass::homothetic, 1.0, "x d/dx"},
      {"euclidean2", "translation", {"1", "0"}, KnownClass::killing, 0.0, "constant field"},
      {"euclidean2", "rotation", {"-x2", "x1"}, KnownClass::killing, 0.0, "rotation about the origin"},
      {"euclidean2", "dilation", {"x1", "x2"}, KnownClass::homothetic, 1.0, "position vector field"},
      {"euclidean2", "conformal_z2", {"x1^2 - x2^2", "2*x1*x2"}, KnownClass::conformal, 0.0,
       "holomorphic z^2, rho = 2 x1"},
      {"euclidean2", "shear", {"x2", "0"}, KnownClass::none, 0.0, "not conformal"},
      {"euclidean3", "rotation", {"-x2", "x1", "0"}, KnownClass::killing, 0.0, "rotation about the x3 axis"},
      {"euclidean3", "dilation", {"x1", "x2", "x3"}, KnownClass::homothetic, 1.0, "position vector field"},
      {"polar2", "rotation", {"0", "1"}, KnownClass::killing, 0.0, "d/dtheta"},
      {"polar2", "dilation", {"x1", "0"}, KnownClass::homothetic, 1.0, "r d/dr"},
      {"sphere2", "rotation", {"0", "1"}, KnownClass::killing, 0.0, "d/dphi"},
      {"sphere2", "gradient_z", {"-sin(x1)", "0"}, KnownClass::conformal, 0.0, "gradient of cos(theta)"},
      {"sphere2", "generic", {"cos(x2)", "sin(x1)"}, KnownClass::none, 0.0, "not conformal"},
      {"halfplane2", "translation", {"1", "0"}, KnownClass::killing, 0.0, "horizontal translation"},
      {"halfplane2", "dilation", {"x1", "x2"}, KnownClass::killing, 0.0, "hyperbolic isometry"},
      {"torus_flat2", "const1", {"1", "0"}, KnownClass::killing, 0.0, "constant field"},
      {"torus_flat2", "const2", {"0", "1"}, KnownClass::killing, 0.0, "constant field"},
  };
  return fields;
}

const std::vector<CatalogAffineField>& catalog_affine_fields() {
  static const std::vector<CatalogAffineField> fields = {
      {"euclidean2", "fiber_dilation", {{"1", "0"}, {"0", "1"}}, {"0", "0"}, {"0", "0"}, "y d/dy"},
      {"euclidean2", "complete_dilation", {{"1", "0"}, {"0", "1"}}, {"0", "0"}, {"x1", "x2"},
       "complete lift of the dilation"},
      {"euclidean2", "complete_rotation", {{"0", "-1"}, {"1", "0"}}, {"0", "0"}, {"-x2", "x1"},
       "complete lift of the rotation"},
      {"euclidean2", "anisotropic", {{"2", "0"}, {"0", "2"}}, {"0", "0"}, {"x1", "x2"}, "fiber scaled twice"},
      {"euclidean2", "sheared_fiber", {{"0", "0"}, {"0", "0"}}, {"x2", "0"}, {"0", "0"}, "position-dependent shift"},
      {"torus_flat2", "vertical_const", {{"0", "0"}, {"0", "0"}}, {"1", "0"}, {"0", "0"}, "vertical lift of const1"},
      {"torus_flat2", "horizontal_const", {{"0", "0"}, {"0", "0"}}, {"0", "0"}, {"1", "0"},
       "horizontal lift of const1"},
  };
  return fields;
}

std::vector<BaseField> catalog_base_fields(const std::string& manifold) {
  std::vector<BaseField> out;
  for (const auto& f : catalog_fields()) {
    if (f.manifold != manifold) continue;
    out.push_back(BaseField::from_text(f.name, f.components, static_cast<int>(f.components.size()), f.known, f.rho));
  }
  return out;
}

BaseField catalog_base_field(const std::string& manifold, const std::string& name) {
  for (const auto& f : catalog_fields())
    if (f.manifold == manifold && f.name == name)
      return BaseField::from_text(f.name, f.components, static_cast<int>(f.components.size()), f.known, f.rho);
  throw ConfigError("no catalog field '" + name + "' on manifold '" + manifold + "'");
}

std::vector<std::pair<std::string, AffineFiberField>> catalog_affine(const std::string& manifold) {
  std::vector<std::pair<std::string, AffineFiberField>> out;
  for (const auto& f : catalog_affine_fields()) {
    if (f.manifold != manifold) continue;
    out.emplace_back(f.name,
                     AffineFiberField::from_text(f.alpha, f.beta, f.horiz, static_cast<int>(f.horiz.size())));
  }
  return out;
}

std::vector<LiftField> catalog_lift_fields(const ManifoldSpec& spec) {
  std::vector<LiftField> out;
  for (const BaseField& v : catalog_base_fields(spec.name())) {
    out.push_back(complete_lift(v, spec));
    out.push_back(horizontal_lift(v, spec));
    out.push_back(vertical_lift(v, spec));
  }
  for (auto& [name, a] : catalog_affine(spec.name())) {
    LiftField f = affine_fiber_field(spec, a);
    f.set_name(name);
    out.push_back(std::move(f));
  }
  return out;
}

std::string to_string(KnownClass k) {
  switch (k) {
    case KnownClass::none: return "none";
    case KnownClass::killing: return "killing";
    case KnownClass::homothetic: return "homothetic";
    case KnownClass::conformal: return "conformal";
  }
  return "none";
}

}  // namespace liftlab
