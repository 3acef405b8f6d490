#include "liftlab/manifold.hpp"

#include <cmath>

namespace liftlab {

bool DomainBox::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  return true;
}

namespace {

// Cell centres of a 3-per-axis lattice over the box.
std::vector<EvalPoint> validation_points(const DomainBox& box) {
  const int n = box.dim();
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  std::vector<EvalPoint> pts;
  pts.reserve(static_cast<std::size_t>(total));
  for (int idx = 0; idx < total; ++idx) {
    EvalPoint p(static_cast<std::size_t>(n));
    int rem = idx;
    for (int i = 0; i < n; ++i) {
      const int c = rem % 3;
      rem /= 3;
      p[i] = box.lo[i] + (c + 0.5) / 3.0 * (box.hi[i] - box.lo[i]);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

ManifoldSpec::ManifoldSpec(std::string name, int dim, std::vector<Expr> metric,
                           std::optional<DomainBox> domain_hint)
    : name_(std::move(name)), dim_(dim), metric_(std::move(metric)) {
  if (dim_ < 1) throw GeometryError("manifold '" + name_ + "': dimension must be positive");
  if (static_cast<int>(metric_.size()) != dim_ * dim_)
    throw GeometryError("manifold '" + name_ + "': metric must have " + std::to_string(dim_ * dim_) + " entries");
  for (const Expr& e : metric_)
    if (e.empty() || e.dim() != dim_)
      throw GeometryError("manifold '" + name_ + "': metric expressions must be over x1..x" + std::to_string(dim_));
  if (domain_hint) {
    if (domain_hint->dim() != dim_ || static_cast<int>(domain_hint->hi.size()) != dim_)
      throw GeometryError("manifold '" + name_ + "': domain_hint has wrong dimension");
    for (int i = 0; i < dim_; ++i)
      if (!(domain_hint->lo[i] < domain_hint->hi[i]))
        throw GeometryError("manifold '" + name_ + "': domain_hint bounds must satisfy lo < hi");
    domain_ = *domain_hint;
    has_hint_ = true;
  } else {
    domain_.lo.assign(static_cast<std::size_t>(dim_), -1.0);
    domain_.hi.assign(static_cast<std::size_t>(dim_), 1.0);
  }

  for (const EvalPoint& p : validation_points(domain_)) {
    MatrixD g(dim_, dim_);
    double scale = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        g(i, j) = metric_expr(i, j).eval<double>(p);
        scale = std::max(scale, std::abs(g(i, j)));
      }
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        if (std::abs(g(i, j) - g(j, i)) > 1e-12 * std::max(1.0, scale))
          throw GeometryError("manifold '" + name_ + "': metric is not symmetric");
    const Inertia in = inertia(g);
    if (in.positive != dim_) throw GeometryError("manifold '" + name_ + "': metric is not positive definite on the domain");
  }
}

ManifoldSpec ManifoldSpec::from_text(std::string name, const std::vector<std::vector<std::string>>& metric,
                                     std::optional<DomainBox> domain_hint) {
  const int n = static_cast<int>(metric.size());
  if (n < 1) throw GeometryError("manifold '" + name + "': empty metric");
  std::vector<Expr> exprs;
  exprs.reserve(static_cast<std::size_t>(n * n));
  for (const auto& row : metric) {
    if (static_cast<int>(row.size()) != n) throw GeometryError("manifold '" + name + "': metric must be square");
    for (const auto& text : row) exprs.push_back(parse(text, n));
  }
  return ManifoldSpec(std::move(name), n, std::move(exprs), std::move(domain_hint));
}

MetricValue metric_at(const ManifoldSpec& spec, std::span<const double> p) {
  if (static_cast<int>(p.size()) != spec.dim()) throw GeometryError("point dimension mismatch");
  MetricValue v;
  v.point.assign(p.begin(), p.end());
  v.g = metric<double>(spec, p);
  v.ginv = inverse(v.g, 1e-14);
  return v;
}

ChristoffelValue christoffel(const ManifoldSpec& spec, std::span<const double> p) {
  if (static_cast<int>(p.size()) != spec.dim()) throw GeometryError("point dimension mismatch");
  ChristoffelValue v;
  v.point.assign(p.begin(), p.end());
  v.gamma = metric_jet<double>(spec, p).gamma;
  return v;
}

double CurvatureValue::lowered(int i, int j, int kk, int m) const {
  double acc = 0.0;
  for (int l = 0; l < k.n; ++l) acc += k(i, j, m, l) * g(l, kk);
  return acc;
}

CurvatureValue curvature(const ManifoldSpec& spec, std::span<const double> p) {
  if (static_cast<int>(p.size()) != spec.dim()) throw GeometryError("point dimension mismatch");
  ConnectionJet<double> cj = connection_jet<double>(spec, p);
  CurvatureValue v;
  v.point.assign(p.begin(), p.end());
  v.k = std::move(cj.curvature);
  v.g = cj.metric.g;
  if (spec.dim() == 2) v.sectional = v.lowered(0, 1, 0, 1) / determinant(v.g);
  return v;
}

}  // namespace liftlab
