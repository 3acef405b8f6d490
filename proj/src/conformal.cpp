#include "liftlab/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <random>
#include <thread>

namespace liftlab {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::killing: return "killing";
    case Classification::homothetic: return "homothetic";
    case Classification::conformal_inessential: return "conformal_inessential";
    case Classification::conformal_essential: return "conformal_essential";
    case Classification::conformal: return "conformal";
    case Classification::non_conformal: return "non_conformal";
  }
  return "non_conformal";
}

bool is_conformal(Classification c) { return c != Classification::non_conformal; }

std::string to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::flow_oracle: return "flow_oracle";
    case Method::both: return "both";
  }
  return "both";
}

Method method_from_string(const std::string& s) {
  if (s == "closed_form") return Method::closed_form;
  if (s == "flow_oracle") return Method::flow_oracle;
  if (s == "both") return Method::both;
  throw ConfigError("unknown method '" + s + "'");
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LIFTLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto worker = [&](int t) {
    for (int i = t; i < count; i += threads) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

struct Box {
  std::vector<double> lo, hi;
};

Box trimmed_box(const ManifoldSpec& manifold, double margin) {
  const DomainBox& d = manifold.domain();
  Box b{d.lo, d.hi};
  for (std::size_t i = 0; i < b.lo.size(); ++i) {
    const double w = d.hi[i] - d.lo[i];
    b.lo[i] += margin * w;
    b.hi[i] -= margin * w;
  }
  return b;
}

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Cell centres of an m^k lattice over the given box.
std::vector<std::vector<double>> lattice(const std::vector<double>& lo, const std::vector<double>& hi, int m) {
  const std::size_t k = lo.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= static_cast<std::size_t>(m);
  std::vector<std::vector<double>> out;
  out.reserve(total);
  std::vector<int> idx(k, 0);
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<double> p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = lo[i] + (idx[i] + 0.5) / m * (hi[i] - lo[i]);
    out.push_back(std::move(p));
    for (std::size_t i = k; i-- > 0;) {
      if (++idx[i] < m) break;
      idx[i] = 0;
    }
  }
  return out;
}

int lattice_side(int count, int k) {
  int m = 1;
  while (std::pow(static_cast<double>(m), k) < count) ++m;
  return m;
}

void check_grid_spec(const GridSpec& g) {
  if (g.count < 1) throw ConfigError("grid count must be positive");
  if (g.mode != "random" && g.mode != "lattice") throw ConfigError("grid mode must be 'random' or 'lattice'");
  if (!(g.fiber_lo < g.fiber_hi)) throw ConfigError("fiber box must satisfy lo < hi");
  if (!(g.margin >= 0.0 && g.margin < 0.5)) throw ConfigError("grid margin must lie in [0, 0.5)");
}

}  // namespace

AnalysisGrid make_grid(const ManifoldSpec& manifold, const GridSpec& g) {
  check_grid_spec(g);
  const int n = manifold.dim();
  const Box box = trimmed_box(manifold, g.margin);
  AnalysisGrid grid;
  grid.spec = g;
  if (g.mode == "random") {
    std::mt19937_64 rng(g.seed);
    grid.points.reserve(static_cast<std::size_t>(g.count));
    for (int s = 0; s < g.count; ++s) {
      TMPoint p;
      p.x.resize(static_cast<std::size_t>(n));
      p.y.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) p.x[i] = box.lo[i] + unit_double(rng) * (box.hi[i] - box.lo[i]);
      for (int i = 0; i < n; ++i) p.y[i] = g.fiber_lo + unit_double(rng) * (g.fiber_hi - g.fiber_lo);
      grid.points.push_back(std::move(p));
    }
  } else {
    std::vector<double> lo = box.lo, hi = box.hi;
    lo.insert(lo.end(), static_cast<std::size_t>(n), g.fiber_lo);
    hi.insert(hi.end(), static_cast<std::size_t>(n), g.fiber_hi);
    for (auto& z : lattice(lo, hi, lattice_side(g.count, 2 * n))) grid.points.push_back(TMPoint::from_coords(z));
  }
  return grid;
}

std::vector<std::vector<double>> make_base_grid(const ManifoldSpec& manifold, const GridSpec& g) {
  check_grid_spec(g);
  const int n = manifold.dim();
  const Box box = trimmed_box(manifold, g.margin);
  if (g.mode == "lattice") return lattice(box.lo, box.hi, lattice_side(g.count, n));
  std::mt19937_64 rng(g.seed);
  std::vector<std::vector<double>> out;
  for (int s = 0; s < g.count; ++s) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = box.lo[i] + unit_double(rng) * (box.hi[i] - box.lo[i]);
    out.push_back(std::move(x));
  }
  return out;
}

ConformalFit extract_conformal_factor(const MatrixD& lie, const MatrixD& gt) {
  if (lie.rows() != gt.rows() || lie.cols() != gt.cols() || gt.rows() != gt.cols())
    throw GeometryError("extract_conformal_factor: shape mismatch");
  const int dim = gt.rows();
  const MatrixD ginv = inverse(gt);
  double tr = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) tr += ginv(i, k) * lie(k, i);
  ConformalFit f;
  f.omega = tr / (2.0 * dim);
  f.residual = frobenius_norm(lie - (2.0 * f.omega) * gt) / frobenius_norm(gt);
  return f;
}

ConformalFit extract_conformal_factor(const BilinearFormValue& lie, const LiftMetricValue& gt) {
  const MatrixD& g = lie.basis == Basis::adapted ? gt.adapted_blocks : gt.coordinate_matrix;
  if (lie.point.x != gt.point.x || lie.point.y != gt.point.y)
    throw GeometryError("extract_conformal_factor: forms are evaluated at different points");
  return extract_conformal_factor(lie.matrix, g);
}

double cross_check_defect(const MatrixD& closed_coordinate, const MatrixD& oracle, const MatrixD& gt_coordinate) {
  const double scale = std::max(frobenius_norm(oracle), frobenius_norm(gt_coordinate));
  return frobenius_norm(closed_coordinate - oracle) / scale;
}

OmegaStats omega_stats(const std::vector<ConformalFit>& fits) {
  OmegaStats s;
  if (fits.empty()) return s;
  s.min = s.max = fits.front().omega;
  double sum = 0.0;
  for (const auto& f : fits) {
    sum += f.omega;
    s.min = std::min(s.min, f.omega);
    s.max = std::max(s.max, f.omega);
    s.max_abs = std::max(s.max_abs, std::abs(f.omega));
    s.max_residual = std::max(s.max_residual, f.residual);
  }
  s.mean = sum / static_cast<double>(fits.size());
  double var = 0.0;
  for (const auto& f : fits) var += (f.omega - s.mean) * (f.omega - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(fits.size()));
  return s;
}

Classification decide_class(const OmegaStats& stats, double domega_dx_max, double domega_dy_max,
                            const Tolerances& tol) {
  if (!(stats.max_residual < tol.residual_tol)) return Classification::non_conformal;
  if (stats.max_abs < tol.killing_tol) {
    return stats.max_residual < tol.killing_tol ? Classification::killing : Classification::conformal;
  }
  if (stats.stddev < tol.constancy_tol) return Classification::homothetic;
  const bool dx_small = domega_dx_max < tol.constancy_tol;
  const bool dy_small = domega_dy_max < tol.constancy_tol;
  if (dy_small && !dx_small) return Classification::conformal_inessential;
  if (dx_small && !dy_small) return Classification::conformal_essential;
  return Classification::conformal;
}

namespace {

bool needs_derivatives(const OmegaStats& s, const Tolerances& tol) {
  return s.max_residual < tol.residual_tol && !(s.max_abs < tol.killing_tol) && !(s.stddev < tol.constancy_tol);
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

// Gradient of the closed-form Omega for every coefficient set; (k) runs over x then y.
std::vector<std::vector<double>> closed_omega_gradient(const LiftField& x, const ManifoldSpec& spec,
                                                       const std::vector<LiftMetricCoeffs>& coeffs, const TMPoint& p,
                                                       const ClosedFormOptions& cf) {
  using D = Dual<double>;
  const int n = spec.dim();
  std::vector<D> xd = lift_point<double>(p.x);
  std::vector<D> yd = lift_point<double>(p.y);
  std::vector<std::vector<double>> grad(coeffs.size(), std::vector<double>(static_cast<std::size_t>(2 * n)));
  for (int k = 0; k < 2 * n; ++k) {
    D& slot = k < n ? xd[k] : yd[k - n];
    slot.d = 1.0;
    const LieTerms<D> t = lie_terms<D>(x, spec, std::span<const D>(xd), std::span<const D>(yd));
    slot.d = 0.0;
    for (std::size_t c = 0; c < coeffs.size(); ++c) grad[c][k] = conformal_factor<D>(t, coeffs[c], cf).d;
  }
  return grad;
}

std::vector<ConformalFit> oracle_fits(const LiftField& x, const ManifoldSpec& spec,
                                      const std::vector<LiftMetricCoeffs>& coeffs, const TMPoint& p,
                                      const OracleOptions& opt, std::vector<MatrixD>* forms = nullptr,
                                      std::vector<MatrixD>* metrics = nullptr) {
  const FlowPair fp = flow_pair(x, spec, p, opt);
  std::vector<ConformalFit> out;
  for (const auto& c : coeffs) {
    const MatrixD L = symmetrize(pullback_derivative(fp, spec, c));
    const MatrixD G = coordinate_lift_metric<double>(spec, c, p.x, p.y);
    out.push_back(extract_conformal_factor(L, G));
    if (forms) forms->push_back(L);
    if (metrics) metrics->push_back(G);
  }
  return out;
}

// Central differences of the oracle Omega in each coordinate direction.
std::vector<std::vector<double>> oracle_omega_gradient(const LiftField& x, const ManifoldSpec& spec,
                                                       const std::vector<LiftMetricCoeffs>& coeffs, const TMPoint& p,
                                                       const OracleOptions& opt) {
  const int n = spec.dim();
  const double h = 1e-4;
  std::vector<std::vector<double>> grad(coeffs.size(), std::vector<double>(static_cast<std::size_t>(2 * n)));
  for (int k = 0; k < 2 * n; ++k) {
    std::vector<double> z = p.coords();
    z[k] += h;
    const auto fp = oracle_fits(x, spec, coeffs, TMPoint::from_coords(z), opt);
    z[k] -= 2.0 * h;
    const auto fm = oracle_fits(x, spec, coeffs, TMPoint::from_coords(z), opt);
    for (std::size_t c = 0; c < coeffs.size(); ++c) grad[c][k] = (fp[c].omega - fm[c].omega) / (2.0 * h);
  }
  return grad;
}

void split_gradient(const std::vector<double>& g, int n, std::vector<double>& dx, std::vector<double>& dy) {
  dx.assign(g.begin(), g.begin() + n);
  dy.assign(g.begin() + n, g.end());
}

}  // namespace

std::vector<ConformalReport> classify_many(const LiftField& x, const ManifoldSpec& spec,
                                           const std::vector<LiftMetricCoeffs>& coeffs, const AnalysisGrid& grid,
                                           const AnalysisOptions& opt) {
  for (const auto& c : coeffs) require_nonsingular(c);
  if (x.dim() != spec.dim()) throw ConfigError("field dimension does not match the manifold");
  if (grid.points.empty()) throw ConfigError("empty analysis grid");
  Method method = opt.method;
  if (x.kind() == LiftKind::general) {
    if (method == Method::closed_form) require_fiber_preserving(x);
    method = Method::flow_oracle;
  }
  const bool use_closed = method != Method::flow_oracle;
  const bool use_oracle = method != Method::closed_form;
  const int n = spec.dim();
  const std::size_t npts = grid.points.size();
  const std::size_t nc = coeffs.size();
  const Tolerances& tol = opt.tolerances;

  // samples[c][i]
  std::vector<std::vector<ConformalSample>> samples(nc, std::vector<ConformalSample>(npts));
  const int threads = resolve_threads(opt.threads);

  parallel_for(static_cast<int>(npts), threads, [&](int i) {
    const TMPoint& p = grid.points[i];
    for (std::size_t c = 0; c < nc; ++c) samples[c][i].point = p;
    std::vector<MatrixD> closed_coord;
    if (use_closed) {
      const LieTerms<double> t = lie_terms<double>(x, spec, std::span<const double>(p.x), std::span<const double>(p.y));
      MatrixD W;
      if (use_oracle) W = coframe_matrix<double>(connection_coefficients<double>(metric_jet<double>(spec, p.x).gamma, p.y));
      for (std::size_t c = 0; c < nc; ++c) {
        const MatrixD L = assemble_lie_gtilde(t, coeffs[c], opt.closed_form);
        samples[c][i].closed = extract_conformal_factor(L, lift_metric_blocks(t.g, coeffs[c]));
        if (use_oracle) closed_coord.push_back(W.transpose() * L * W);
      }
    }
    if (use_oracle) {
      std::vector<MatrixD> forms, metrics;
      const auto fits = oracle_fits(x, spec, coeffs, p, opt.oracle, &forms, &metrics);
      for (std::size_t c = 0; c < nc; ++c) {
        samples[c][i].oracle = fits[c];
        if (use_closed) samples[c][i].cross_defect = cross_check_defect(closed_coord[c], forms[c], metrics[c]);
      }
    }
  });

  std::vector<ConformalReport> reports(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    ConformalReport& r = reports[c];
    r.field = x.name();
    r.kind = x.kind();
    r.coeffs = coeffs[c];
    r.method = method;
    r.tolerances = tol;
    r.samples = std::move(samples[c]);
    for (std::size_t i = 0; i < npts; ++i) r.max_cross_defect = std::max(r.max_cross_defect, r.samples[i].cross_defect);
    if (use_closed && use_oracle && !(r.max_cross_defect <= tol.cross_check_tol)) {
      std::size_t worst = 0;
      for (std::size_t i = 0; i < npts; ++i)
        if (!(r.samples[i].cross_defect <= r.samples[worst].cross_defect)) worst = i;
      const TMPoint& p = r.samples[worst].point;
      std::string where;
      for (double v : p.coords()) where += (where.empty() ? "" : ", ") + std::to_string(v);
      throw CrossCheckError("closed form and flow oracle disagree for field '" + x.name() + "' at (" + where +
                            "): relative defect " + std::to_string(r.max_cross_defect) + " exceeds " +
                            std::to_string(tol.cross_check_tol));
    }
    std::vector<ConformalFit> primary, secondary;
    for (const auto& s : r.samples) {
      if (use_closed) primary.push_back(*s.closed);
      if (use_oracle) (use_closed ? secondary : primary).push_back(*s.oracle);
    }
    r.stats = omega_stats(primary);
    if (use_closed && use_oracle) r.oracle_stats = omega_stats(secondary);
  }

  // Derivatives of Omega are only needed when constancy fails on a conformal verdict.
  std::vector<bool> need(nc, false), need_oracle(nc, false);
  bool any = false;
  for (std::size_t c = 0; c < nc; ++c) {
    need[c] = needs_derivatives(reports[c].stats, tol);
    if (reports[c].oracle_stats) need_oracle[c] = needs_derivatives(*reports[c].oracle_stats, tol);
    any = any || need[c] || need_oracle[c];
  }
  std::vector<std::vector<double>> ddx(nc, std::vector<double>(npts, 0.0)), ddy = ddx;
  std::vector<std::vector<double>> oddx = ddx, oddy = ddx;
  if (any) {
    parallel_for(static_cast<int>(npts), threads, [&](int i) {
      const TMPoint& p = grid.points[i];
      bool closed_needed = false, oracle_needed = false;
      for (std::size_t c = 0; c < nc; ++c) {
        closed_needed = closed_needed || (need[c] && use_closed);
        oracle_needed = oracle_needed || (need[c] && !use_closed) || need_oracle[c];
      }
      if (closed_needed) {
        const auto grad = closed_omega_gradient(x, spec, coeffs, p, opt.closed_form);
        for (std::size_t c = 0; c < nc; ++c) {
          auto& s = reports[c].samples[i];
          split_gradient(grad[c], n, s.domega_dx, s.domega_dy);
          ddx[c][i] = norm2(s.domega_dx);
          ddy[c][i] = norm2(s.domega_dy);
        }
      }
      if (oracle_needed) {
        const auto grad = oracle_omega_gradient(x, spec, coeffs, p, opt.oracle);
        for (std::size_t c = 0; c < nc; ++c) {
          std::vector<double> dx, dy;
          split_gradient(grad[c], n, dx, dy);
          oddx[c][i] = norm2(dx);
          oddy[c][i] = norm2(dy);
          if (!use_closed) {
            reports[c].samples[i].domega_dx = dx;
            reports[c].samples[i].domega_dy = dy;
            ddx[c][i] = oddx[c][i];
            ddy[c][i] = oddy[c][i];
          }
        }
      }
    });
  }

  for (std::size_t c = 0; c < nc; ++c) {
    ConformalReport& r = reports[c];
    r.domega_dx_max = *std::max_element(ddx[c].begin(), ddx[c].end());
    r.domega_dy_max = *std::max_element(ddy[c].begin(), ddy[c].end());
    r.classification = decide_class(r.stats, r.domega_dx_max, r.domega_dy_max, tol);
    if (r.classification == Classification::homothetic) r.homothety = r.stats.mean;
    if (r.oracle_stats) {
      const double odx = *std::max_element(oddx[c].begin(), oddx[c].end());
      const double ody = *std::max_element(oddy[c].begin(), oddy[c].end());
      r.oracle_classification = decide_class(*r.oracle_stats, odx, ody, tol);
    }
  }
  return reports;
}

ConformalReport classify(const LiftField& x, const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                         const AnalysisGrid& grid, const AnalysisOptions& opt) {
  return std::move(classify_many(x, spec, {coeffs}, grid, opt).front());
}

namespace {

template <class S>
Matrix<S> base_lie_metric(const BaseField& v, const ManifoldSpec& spec, std::span<const S> x) {
  const int n = spec.dim();
  const MetricJet<S> jet = metric_jet<S>(spec, x);
  const std::vector<S> V = eval_all<S>(v.components, x);
  const Matrix<S> dV = base_field_jacobian<S>(v.components, x);
  Matrix<S> L(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S acc(0.0);
      for (int a = 0; a < n; ++a) acc += V[a] * jet.dg[a](i, j) + dV(i, a) * jet.g(a, j) + dV(j, a) * jet.g(i, a);
      L(i, j) = acc;
    }
  return L;
}

}  // namespace

BaseReport analyze_base(const BaseField& v, const ManifoldSpec& spec, const GridSpec& grid, const Tolerances& tol) {
  if (v.dim() != spec.dim()) throw ConfigError("field dimension does not match the manifold");
  BaseReport r;
  r.field = v.name;
  r.points = make_base_grid(spec, grid);
  for (const auto& x : r.points) {
    const MatrixD L = base_lie_metric<double>(v, spec, std::span<const double>(x));
    r.fits.push_back(extract_conformal_factor(L, metric<double>(spec, std::span<const double>(x))));
  }
  r.stats = omega_stats(r.fits);
  if (!(r.stats.max_residual < tol.residual_tol))
    r.classification = Classification::non_conformal;
  else if (r.stats.max_abs < tol.killing_tol && r.stats.max_residual < tol.killing_tol)
    r.classification = Classification::killing;
  else if (r.stats.stddev < tol.constancy_tol && !(r.stats.max_abs < tol.killing_tol))
    r.classification = Classification::homothetic;
  else
    r.classification = Classification::conformal;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void require_riemannian(const LiftMetricCoeffs& c) {
  require_nonsingular(c);
  if (!(c.a > 0.0 && c.discriminant() > 0.0))
    throw ConfigError("theorem suites require a > 0 and ac - b^2 > 0");
}

TheoremInstance make_instance(const ConformalReport& r, const std::string& lift) {
  TheoremInstance in;
  in.field = r.field;
  in.lift = lift;
  in.verdict = r.classification;
  in.oracle_verdict = r.oracle_classification;
  in.stats = r.stats;
  in.domega_dy_max = r.domega_dy_max;
  in.vacuous = !is_conformal(r.classification);
  return in;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void add_agreement_note(TheoremReport& rep, const TheoremInstance& in) {
  if (in.oracle_verdict && *in.oracle_verdict != in.verdict)
    rep.notes.push_back(in.lift + " lift of '" + in.field + "': oracle verdict " + to_string(*in.oracle_verdict) +
                        " differs from closed-form verdict " + to_string(in.verdict));
}

}  // namespace

TheoremReport verify_theorem1(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                              const std::vector<BaseField>& fields, const AnalysisGrid& grid,
                              const AnalysisOptions& opt) {
  require_riemannian(coeffs);
  TheoremReport rep;
  rep.name = "theorem1";
  rep.coeffs = coeffs;
  const Tolerances& tol = opt.tolerances;
  for (const BaseField& v : fields) {
    const LiftField lifts[3] = {complete_lift(v, spec), horizontal_lift(v, spec), vertical_lift(v, spec)};
    bool all_vacuous = true;
    for (const LiftField& f : lifts) {
      const ConformalReport r = classify(f, spec, coeffs, grid, opt);
      TheoremInstance in = make_instance(r, to_string(f.kind()));
      if (!in.vacuous) {
        all_vacuous = false;
        if (f.kind() == LiftKind::complete) {
          rep.worst_defect = std::max(rep.worst_defect, r.stats.stddev);
          if (!(r.stats.stddev < tol.constancy_tol))
            in.violations.push_back("complete lift is conformal but std(Omega) = " + fmt(r.stats.stddev));
          if (!(r.domega_dy_max < tol.constancy_tol))
            in.violations.push_back("complete lift is conformal but |dOmega/dy| = " + fmt(r.domega_dy_max));
        } else {
          rep.worst_defect = std::max(rep.worst_defect, r.stats.max_abs);
          if (!(r.stats.max_abs < tol.killing_tol))
            in.violations.push_back(in.lift + " lift is conformal but max |Omega| = " + fmt(r.stats.max_abs));
        }
      }
      if (!in.violations.empty()) rep.passed = false;
      add_agreement_note(rep, in);
      rep.instances.push_back(std::move(in));
    }
    if (all_vacuous) rep.notes.push_back("vacuous instance: no lift of '" + v.name + "' is conformal");
  }
  rep.notes.push_back("numeric audit over a finite grid, not a proof");
  return rep;
}

TheoremReport verify_theorem2(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                              const std::vector<std::pair<std::string, AffineFiberField>>& fields,
                              const AnalysisGrid& grid, const AnalysisOptions& opt) {
  require_riemannian(coeffs);
  TheoremReport rep;
  rep.name = "theorem2";
  rep.coeffs = coeffs;
  const Tolerances& tol = opt.tolerances;
  for (const auto& [name, a] : fields) {
    LiftField f = affine_fiber_field(spec, a);
    f.set_name(name);
    const ConformalReport r = classify(f, spec, coeffs, grid, opt);
    TheoremInstance in = make_instance(r, to_string(f.kind()));
    if (in.vacuous) {
      rep.notes.push_back("vacuous instance: '" + name + "' is not conformal");
    } else if (r.classification == Classification::conformal_inessential && !(r.stats.stddev < tol.constancy_tol)) {
      in.violations.push_back("inessential conformal field with std(Omega) = " + fmt(r.stats.stddev));
    }
    if (r.classification == Classification::conformal_inessential)
      rep.worst_defect = std::max(rep.worst_defect, r.stats.stddev);
    if (!in.violations.empty()) rep.passed = false;
    add_agreement_note(rep, in);
    rep.instances.push_back(std::move(in));
  }
  rep.notes.push_back("numeric audit over a finite grid, not a proof");
  return rep;
}

}  // namespace liftlab
