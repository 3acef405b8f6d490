#include "liftlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

namespace liftlab {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string point_text(const std::vector<double>& z) {
  std::string s = "(";
  for (std::size_t i = 0; i < z.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", z[i]);
    s += buf;
  }
  return s + ")";
}

std::string slot_text(FrameSlot s) { return "X_" + std::to_string(s.index + 1) + (s.bar ? "bar" : ""); }

// Records a defect; failures keep only the first few messages.
void record(SuiteResult& r, double defect, const std::string& what) {
  ++r.checks;
  r.worst_defect = std::max(r.worst_defect, defect);
  if (!(defect <= r.threshold)) {
    r.passed = false;
    if (r.failures.size() < 10) r.failures.push_back(what + ": defect " + fmt(defect));
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lemma1", "lemma3-duality", "lemma4-oracle",
                                                 "theorem1", "theorem2", "eq1"};
  return names;
}

std::string canonical_suite_name(const std::string& name) {
  if (name == "lemma3") return "lemma3-duality";
  if (name == "lemma4") return "lemma4-oracle";
  for (const auto& s : suite_names())
    if (s == name) return s;
  throw ConfigError("unknown suite '" + name + "'");
}

SuiteResult run_lemma1(const ManifoldSpec& spec, const AnalysisGrid& grid, double tol) {
  SuiteResult r;
  r.name = "lemma1";
  r.manifold = spec.name();
  r.threshold = tol;
  const int n = spec.dim();
  for (const TMPoint& p : grid.points) {
    for (int s1 = 0; s1 < 2 * n; ++s1)
      for (int s2 = 0; s2 < 2 * n; ++s2) {
        const FrameSlot a{s1 % n, s1 >= n};
        const FrameSlot b{s2 % n, s2 >= n};
        const std::vector<double> closed = adapted_bracket(spec, p, a, b);
        const std::vector<double> numeric = numeric_bracket(spec, p, a, b);
        double d = 0.0;
        for (std::size_t k = 0; k < closed.size(); ++k) d = std::max(d, std::abs(closed[k] - numeric[k]));
        const std::string what = "[" + slot_text(a) + ", " + slot_text(b) + "] at " + point_text(p.coords());
        record(r, d, what);
        if (a.bar && b.bar) {
          ++r.checks;
          if (std::any_of(closed.begin(), closed.end(), [](double v) { return v != 0.0; })) {
            r.passed = false;
            r.failures.push_back(what + ": vertical bracket is not identically zero");
          }
        }
      }
  }
  return r;
}

SuiteResult run_lemma3_duality(const ManifoldSpec& spec, const std::vector<LiftField>& fields,
                               const AnalysisGrid& grid, double tol) {
  SuiteResult r;
  r.name = "lemma3-duality";
  r.manifold = spec.name();
  r.threshold = tol;
  for (const LiftField& f : fields) {
    if (f.kind() == LiftKind::general) {
      r.notes.push_back("skipped '" + f.name() + "': not fiber-preserving");
      continue;
    }
    for (const TMPoint& p : grid.points) {
      const LieFrameValue v = lie_frame(f, spec, p);
      record(r, v.duality_defect(), f.name() + " (" + to_string(f.kind()) + ") at " + point_text(p.coords()));
    }
  }
  return r;
}

SuiteResult run_lemma4_oracle(const ManifoldSpec& spec, const std::vector<LiftField>& fields,
                              const std::vector<LiftMetricCoeffs>& coeffs, const AnalysisGrid& grid,
                              const AnalysisOptions& opt, double tol) {
  SuiteResult r;
  r.name = "lemma4-oracle";
  r.manifold = spec.name();
  r.threshold = tol;
  for (const auto& c : coeffs) require_nonsingular(c);
  const std::size_t npts = grid.points.size();
  for (const LiftField& f : fields) {
    if (f.kind() == LiftKind::general) {
      r.notes.push_back("skipped '" + f.name() + "': not fiber-preserving");
      continue;
    }
    std::vector<std::vector<double>> defects(npts);
    parallel_for(static_cast<int>(npts), resolve_threads(opt.threads), [&](int i) {
      const TMPoint& p = grid.points[i];
      const LieTerms<double> t = lie_terms<double>(f, spec, std::span<const double>(p.x), std::span<const double>(p.y));
      const MatrixD W =
          coframe_matrix<double>(connection_coefficients<double>(metric_jet<double>(spec, p.x).gamma, p.y));
      const FlowPair fp = flow_pair(f, spec, p, opt.oracle);
      for (const auto& c : coeffs) {
        const MatrixD closed = W.transpose() * assemble_lie_gtilde(t, c, opt.closed_form) * W;
        const MatrixD oracle = symmetrize(pullback_derivative(fp, spec, c));
        const MatrixD G = coordinate_lift_metric<double>(spec, c, p.x, p.y);
        defects[i].push_back(cross_check_defect(closed, oracle, G));
      }
    });
    for (std::size_t i = 0; i < npts; ++i)
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        char buf[96];
        std::snprintf(buf, sizeof buf, " with (a,b,c) = (%g, %g, %g)", coeffs[k].a, coeffs[k].b, coeffs[k].c);
        record(r, defects[i][k],
               f.name() + " (" + to_string(f.kind()) + ") at " + point_text(grid.points[i].coords()) + buf);
      }
  }
  return r;
}

std::vector<ManifoldSpec> eq1_partners(const ManifoldSpec& spec) {
  const int n = spec.dim();
  std::vector<std::vector<std::string>> scaled(static_cast<std::size_t>(n), std::vector<std::string>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scaled[i][j] = "(1 + 0.1*x1^2)*(" + spec.metric_expr(i, j).to_string() + ")";
  std::vector<ManifoldSpec> out;
  out.push_back(ManifoldSpec::from_text(spec.name() + "_scaled", scaled, spec.domain()));
  for (const auto& name : catalog_manifold_names()) {
    if (name == spec.name()) continue;
    ManifoldSpec other = catalog_manifold(name);
    if (other.dim() != n) continue;
    // Only partners whose chart box overlaps ours by a positive width in every axis.
    bool overlap = true;
    for (int i = 0; i < n; ++i)
      overlap = overlap && std::min(spec.domain().hi[i], other.domain().hi[i]) >
                               std::max(spec.domain().lo[i], other.domain().lo[i]) + 0.1;
    if (overlap) out.push_back(std::move(other));
  }
  return out;
}

SuiteResult run_eq1(const ManifoldSpec& spec, const std::vector<BaseField>& fields, const GridSpec& grid,
                    double tol) {
  SuiteResult r;
  r.name = "eq1";
  r.manifold = spec.name();
  r.threshold = tol;
  const int n = spec.dim();

  std::vector<Expr> mixed;
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      mixed.push_back(parse("x" + std::to_string(h + 1) + "*sin(x" + std::to_string(i + 1) + ") + " +
                                (h == i ? "1" : "0"),
                            n));

  const std::vector<ManifoldSpec> partners = eq1_partners(spec);
  for (const ManifoldSpec& other : partners) {
    // Sample where both charts are valid.
    DomainBox box = spec.domain();
    for (int i = 0; i < n; ++i) {
      box.lo[i] = std::max(box.lo[i], other.domain().lo[i]);
      box.hi[i] = std::min(box.hi[i], other.domain().hi[i]);
    }
    const ManifoldSpec sampler(spec.name(), n, spec.metric_exprs(), box);
    const auto points = make_base_grid(sampler, grid);
    const TensorSource sources[] = {TensorSource::metric_tensor(), TensorSource::cov2_exprs(other.metric_exprs()),
                                    TensorSource::mixed11_exprs(mixed), TensorSource::connection_difference(other)};
    for (const BaseField& v : fields) {
      for (const auto& x : points) {
        for (const TensorSource& s : sources) {
          const BaseLieDerivative d = base_lie_derivative(v, s, spec, x);
          std::string what = v.name + " on " + to_string(s.type);
          if (s.origin != TensorSource::Origin::metric && s.origin != TensorSource::Origin::expressions)
            what += " Gamma(" + other.name() + ") - Gamma(" + spec.name() + ")";
          record(r, d.max_discrepancy(), what + " at " + point_text(x));
        }
      }
    }
  }
  if (fields.empty()) r.notes.push_back("no base fields on '" + spec.name() + "'");
  return r;
}

namespace {

SuiteResult from_theorem(TheoremReport t, const ManifoldSpec& spec, const Tolerances& tol) {
  SuiteResult r;
  r.name = t.name;
  r.manifold = spec.name();
  r.passed = t.passed;
  r.worst_defect = t.worst_defect;
  r.threshold = t.name == "theorem1" ? std::min(tol.constancy_tol, tol.killing_tol) : tol.constancy_tol;
  r.checks = static_cast<int>(t.instances.size());
  for (const auto& in : t.instances)
    for (const auto& v : in.violations) r.failures.push_back(in.field + " (" + in.lift + "): " + v);
  r.notes = t.notes;
  r.theorem = std::move(t);
  return r;
}

}  // namespace

SuiteResult run_theorem1(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                         const std::vector<BaseField>& fields, const AnalysisGrid& grid,
                         const AnalysisOptions& opt) {
  return from_theorem(verify_theorem1(spec, coeffs, fields, grid, opt), spec, opt.tolerances);
}

SuiteResult run_theorem2(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                         const std::vector<std::pair<std::string, AffineFiberField>>& fields,
                         const AnalysisGrid& grid, const AnalysisOptions& opt) {
  return from_theorem(verify_theorem2(spec, coeffs, fields, grid, opt), spec, opt.tolerances);
}

}  // namespace liftlab
