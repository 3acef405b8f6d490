#include "liftlab/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace liftlab {

using nlohmann::json;
using nlohmann::ordered_json;

std::string engine_version() { return LIFTLAB_VERSION; }

namespace {

// ---------------------------------------------------------------------------
// Parsing helpers

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) bad("unknown key '" + it.key() + "' in " + where);
  }
}

double get_number(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(what + " must be finite");
  return v;
}

std::string expr_text(const json& j, const std::string& what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
    return buf;
  }
  bad(what + " must be an expression string or a number");
}

std::vector<std::string> expr_list(const json& j, const std::string& what, int n) {
  if (!j.is_array()) bad(what + " must be an array");
  if (n >= 0 && static_cast<int>(j.size()) != n)
    bad(what + " must have " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(expr_text(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<std::string>> expr_matrix(const json& j, const std::string& what, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) bad(what + " must be a " + std::to_string(n) + "x" +
                                                             std::to_string(n) + " array");
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(expr_list(j[i], what + "[" + std::to_string(i) + "]", n));
  return out;
}

std::vector<ManifoldSpec> parse_manifolds(const json& j) {
  std::vector<ManifoldSpec> out;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "catalog") {
      for (const auto& m : catalog_manifold_names()) out.push_back(catalog_manifold(m));
    } else {
      out.push_back(catalog_manifold(name));
    }
    return out;
  }
  if (j.is_array()) {
    if (j.empty()) bad("manifold list is empty");
    for (const auto& e : j) {
      auto part = parse_manifolds(e);
      for (auto& m : part) out.push_back(std::move(m));
    }
    return out;
  }
  if (!j.is_object()) bad("manifold must be a catalog name, a list, or an object");
  if (j.contains("catalog")) {
    check_keys(j, "manifold", {"catalog", "radius"});
    if (!j["catalog"].is_string()) bad("manifold.catalog must be a string");
    const double radius = j.contains("radius") ? get_number(j["radius"], "manifold.radius") : 1.0;
    out.push_back(catalog_manifold(j["catalog"].get<std::string>(), radius));
    return out;
  }
  check_keys(j, "manifold", {"name", "dim", "metric", "domain_hint"});
  if (!j.contains("dim") || !j["dim"].is_number_integer()) bad("manifold.dim must be an integer");
  const int n = j["dim"].get<int>();
  if (n < 1) bad("manifold.dim must be positive");
  if (!j.contains("metric")) bad("manifold.metric is required");
  const auto metric = expr_matrix(j["metric"], "manifold.metric", n);
  std::optional<DomainBox> box;
  if (j.contains("domain_hint")) {
    const json& d = j["domain_hint"];
    if (!d.is_object() || !d.contains("lo") || !d.contains("hi")) bad("manifold.domain_hint needs 'lo' and 'hi'");
    check_keys(d, "manifold.domain_hint", {"lo", "hi"});
    DomainBox b;
    for (const char* key : {"lo", "hi"}) {
      const json& arr = d[key];
      if (!arr.is_array() || static_cast<int>(arr.size()) != n)
        bad(std::string("manifold.domain_hint.") + key + " must have " + std::to_string(n) + " numbers");
      auto& dst = std::string(key) == "lo" ? b.lo : b.hi;
      for (const auto& v : arr) dst.push_back(get_number(v, std::string("manifold.domain_hint.") + key));
    }
    for (int i = 0; i < n; ++i)
      if (!(b.lo[i] < b.hi[i])) bad("manifold.domain_hint needs lo < hi in every coordinate");
    box = b;
  }
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "custom";
  out.push_back(ManifoldSpec::from_text(name, metric, box));
  return out;
}

const std::set<std::string>& classification_names() {
  static const std::set<std::string> names = {"killing",   "homothetic",   "conformal_inessential",
                                              "conformal_essential", "conformal", "non_conformal"};
  return names;
}

void add_base_unique(std::vector<BaseField>& bases, const BaseField& v) {
  for (const auto& b : bases)
    if (b.name == v.name) return;
  bases.push_back(v);
}

void parse_fields(const json* j, ManifoldEntry& entry) {
  const ManifoldSpec& spec = entry.spec;
  const int n = spec.dim();
  if (!j || (j->is_string() && j->get<std::string>() == "catalog")) {
    for (auto& f : catalog_lift_fields(spec)) entry.fields.push_back({std::move(f), std::nullopt});
    entry.base_fields = catalog_base_fields(spec.name());
    entry.affine_fields = catalog_affine(spec.name());
    return;
  }
  if (!j->is_array()) bad("fields must be \"catalog\" or an array of field objects");
  int index = 0;
  for (const json& f : *j) {
    const std::string where = "fields[" + std::to_string(index++) + "]";
    if (!f.is_object()) bad(where + " must be an object");
    check_keys(f, where, {"kind", "name", "field", "V", "alpha", "beta", "horiz", "vert", "expect"});
    if (!f.contains("kind") || !f["kind"].is_string()) bad(where + ".kind is required");
    const LiftKind kind = lift_kind_from_string(f["kind"].get<std::string>());
    std::optional<std::string> expect;
    if (f.contains("expect")) {
      if (!f["expect"].is_string() || !classification_names().count(f["expect"].get<std::string>()))
        bad(where + ".expect must be a classification name");
      expect = f["expect"].get<std::string>();
    }
    const std::string catalog_name = f.contains("field") ? f["field"].get<std::string>() : "";
    std::string name = f.contains("name") ? f["name"].get<std::string>() : catalog_name;
    if (name.empty()) name = "field" + std::to_string(index);

    switch (kind) {
      case LiftKind::complete:
      case LiftKind::horizontal:
      case LiftKind::vertical: {
        BaseField v;
        if (!catalog_name.empty()) {
          v = catalog_base_field(spec.name(), catalog_name);
        } else {
          if (!f.contains("V")) bad(where + " needs 'field' (catalog name) or 'V' (components)");
          v = BaseField::from_text(name, expr_list(f["V"], where + ".V", n), n);
        }
        LiftField lf = kind == LiftKind::complete     ? complete_lift(v, spec)
                       : kind == LiftKind::horizontal ? horizontal_lift(v, spec)
                                                      : vertical_lift(v, spec);
        entry.fields.push_back({std::move(lf), expect});
        add_base_unique(entry.base_fields, v);
        break;
      }
      case LiftKind::fiber_preserving: {
        AffineFiberField a;
        if (!catalog_name.empty()) {
          bool found = false;
          for (auto& [cn, ca] : catalog_affine(spec.name()))
            if (cn == catalog_name) {
              a = ca;
              found = true;
            }
          if (!found) bad("no catalog fiber-preserving field '" + catalog_name + "' on '" + spec.name() + "'");
        } else {
          std::vector<std::vector<std::string>> alpha(static_cast<std::size_t>(n), std::vector<std::string>(n, "0"));
          std::vector<std::string> beta(static_cast<std::size_t>(n), "0"), horiz(beta);
          if (f.contains("alpha")) alpha = expr_matrix(f["alpha"], where + ".alpha", n);
          if (f.contains("beta")) beta = expr_list(f["beta"], where + ".beta", n);
          if (f.contains("horiz")) horiz = expr_list(f["horiz"], where + ".horiz", n);
          a = AffineFiberField::from_text(alpha, beta, horiz, n);
        }
        LiftField lf = affine_fiber_field(spec, a);
        lf.set_name(name);
        entry.fields.push_back({std::move(lf), expect});
        entry.affine_fields.emplace_back(name, a);
        break;
      }
      case LiftKind::general: {
        if (!f.contains("horiz") || !f.contains("vert")) bad(where + " (general) needs 'horiz' and 'vert'");
        LiftField lf = general_field(spec, expr_list(f["horiz"], where + ".horiz", n),
                                     expr_list(f["vert"], where + ".vert", n));
        lf.set_name(name);
        entry.fields.push_back({std::move(lf), expect});
        break;
      }
    }
  }
}

LiftMetricCoeffs parse_coeffs(const json& j) {
  if (!j.is_object()) bad("metric_coeffs entries must be objects {a, b, c}");
  check_keys(j, "metric_coeffs", {"a", "b", "c"});
  LiftMetricCoeffs c;
  for (const char* k : {"a", "b", "c"})
    if (!j.contains(k)) bad(std::string("metric_coeffs.") + k + " is required");
  c.a = get_number(j["a"], "metric_coeffs.a");
  c.b = get_number(j["b"], "metric_coeffs.b");
  c.c = get_number(j["c"], "metric_coeffs.c");
  require_nonsingular(c);
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("config must be a JSON object");
  check_keys(j, "config",
             {"manifold", "fields", "metric_coeffs", "grid", "tolerances", "oracle", "method", "threads", "suites",
              "outputs"});
  RunConfig cfg;
  cfg.raw_json = j.dump();

  try {
    if (!j.contains("manifold")) bad("config.manifold is required");
    for (auto& m : parse_manifolds(j["manifold"])) {
      ManifoldEntry e{std::move(m), {}, {}, {}};
      parse_fields(j.contains("fields") ? &j["fields"] : nullptr, e);
      cfg.manifolds.push_back(std::move(e));
    }

    if (j.contains("metric_coeffs")) {
      const json& mc = j["metric_coeffs"];
      if (mc.is_array()) {
        if (mc.empty()) bad("metric_coeffs list is empty");
        for (const auto& c : mc) cfg.coeffs.push_back(parse_coeffs(c));
      } else {
        cfg.coeffs.push_back(parse_coeffs(mc));
      }
    } else {
      cfg.coeffs.push_back(LiftMetricCoeffs{1.0, 0.0, 1.0});
    }

    if (j.contains("grid")) {
      const json& g = j["grid"];
      if (!g.is_object()) bad("grid must be an object");
      check_keys(g, "grid", {"mode", "count", "seed", "fiber_box", "margin"});
      if (g.contains("mode")) {
        if (!g["mode"].is_string()) bad("grid.mode must be a string");
        cfg.grid.mode = g["mode"].get<std::string>();
      }
      if (g.contains("count")) {
        if (!g["count"].is_number_integer()) bad("grid.count must be an integer");
        cfg.grid.count = g["count"].get<int>();
      }
      if (g.contains("seed")) {
        if (!g["seed"].is_number_unsigned()) bad("grid.seed must be a non-negative integer");
        cfg.grid.seed = g["seed"].get<std::uint64_t>();
      }
      if (g.contains("fiber_box")) {
        const json& fb = g["fiber_box"];
        if (!fb.is_array() || fb.size() != 2) bad("grid.fiber_box must be [lo, hi]");
        cfg.grid.fiber_lo = get_number(fb[0], "grid.fiber_box[0]");
        cfg.grid.fiber_hi = get_number(fb[1], "grid.fiber_box[1]");
      }
      if (g.contains("margin")) cfg.grid.margin = get_number(g["margin"], "grid.margin");
    }
    if (cfg.grid.mode != "random" && cfg.grid.mode != "lattice") bad("grid.mode must be 'random' or 'lattice'");
    if (cfg.grid.count < 8) bad("grid.count must be at least 8");
    if (!(cfg.grid.fiber_lo < cfg.grid.fiber_hi)) bad("grid.fiber_box must satisfy lo < hi");
    if (!(cfg.grid.margin >= 0.0 && cfg.grid.margin < 0.5)) bad("grid.margin must lie in [0, 0.5)");

    if (j.contains("tolerances")) {
      const json& t = j["tolerances"];
      if (!t.is_object()) bad("tolerances must be an object");
      check_keys(t, "tolerances", {"killing_tol", "residual_tol", "constancy_tol", "cross_check_tol"});
      Tolerances& tol = cfg.options.tolerances;
      auto set = [&](const char* key, double& dst) {
        if (!t.contains(key)) return;
        dst = get_number(t[key], std::string("tolerances.") + key);
        if (!(dst > 0.0)) bad(std::string("tolerances.") + key + " must be positive");
      };
      set("killing_tol", tol.killing_tol);
      set("residual_tol", tol.residual_tol);
      set("constancy_tol", tol.constancy_tol);
      set("cross_check_tol", tol.cross_check_tol);
    }

    if (j.contains("oracle")) {
      const json& o = j["oracle"];
      if (!o.is_object()) bad("oracle must be an object");
      check_keys(o, "oracle", {"t_step", "steps"});
      if (o.contains("t_step")) cfg.options.oracle.t_step = get_number(o["t_step"], "oracle.t_step");
      if (o.contains("steps")) {
        if (!o["steps"].is_number_integer()) bad("oracle.steps must be an integer");
        cfg.options.oracle.steps = o["steps"].get<int>();
      }
    }
    if (!(cfg.options.oracle.t_step > 0.0)) bad("oracle.t_step must be positive");
    if (cfg.options.oracle.steps < 1) bad("oracle.steps must be at least 1");

    if (j.contains("method")) {
      if (!j["method"].is_string()) bad("method must be a string");
      cfg.options.method = method_from_string(j["method"].get<std::string>());
    }
    if (j.contains("threads")) {
      if (!j["threads"].is_number_integer() || j["threads"].get<int>() < 0) bad("threads must be >= 0");
      cfg.options.threads = j["threads"].get<int>();
    }
    if (j.contains("suites")) {
      if (!j["suites"].is_array()) bad("suites must be an array of names");
      for (const auto& s : j["suites"]) {
        if (!s.is_string()) bad("suite names must be strings");
        cfg.suites.push_back(canonical_suite_name(s.get<std::string>()));
      }
    }
    if (j.contains("outputs")) {
      const json& o = j["outputs"];
      if (!o.is_object()) bad("outputs must be an object");
      check_keys(o, "outputs", {"report_path", "csv_path"});
      if (o.contains("report_path")) cfg.report_path = o["report_path"].get<std::string>();
      if (o.contains("csv_path")) cfg.csv_path = o["csv_path"].get<std::string>();
    }
  } catch (const json::exception& e) {
    bad(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Reports

namespace {

ordered_json coeffs_json(const LiftMetricCoeffs& c) { return ordered_json{{"a", c.a}, {"b", c.b}, {"c", c.c}}; }

ordered_json stats_json(const OmegaStats& s) {
  return ordered_json{{"mean", s.mean},       {"std", s.stddev},   {"min", s.min},
                      {"max", s.max},         {"max_abs", s.max_abs}, {"max_residual", s.max_residual}};
}

ordered_json tolerances_json(const Tolerances& t) {
  return ordered_json{{"killing_tol", t.killing_tol},
                      {"residual_tol", t.residual_tol},
                      {"constancy_tol", t.constancy_tol},
                      {"cross_check_tol", t.cross_check_tol}};
}

ordered_json report_json(const ConformalReport& r) {
  ordered_json j;
  j["field"] = r.field;
  j["kind"] = to_string(r.kind);
  j["coeffs"] = coeffs_json(r.coeffs);
  j["signature"] = to_string(signature_classify(r.coeffs));
  j["method"] = to_string(r.method);
  j["classification"] = to_string(r.classification);
  if (r.classification == Classification::homothetic) j["homothety"] = r.homothety;
  j["oracle_classification"] = r.oracle_classification ? ordered_json(to_string(*r.oracle_classification)) : nullptr;
  j["omega_stats"] = stats_json(r.stats);
  j["oracle_omega_stats"] = r.oracle_stats ? stats_json(*r.oracle_stats) : ordered_json(nullptr);
  j["dOmega_dx_norm"] = r.domega_dx_max;
  j["dOmega_dy_norm"] = r.domega_dy_max;
  j["max_cross_defect"] = r.max_cross_defect;
  j["tolerances"] = tolerances_json(r.tolerances);
  ordered_json samples = ordered_json::array();
  for (const auto& s : r.samples) {
    ordered_json e;
    e["x"] = s.point.x;
    e["y"] = s.point.y;
    const ConformalFit& f = s.closed ? *s.closed : *s.oracle;
    e["omega"] = f.omega;
    e["residual"] = f.residual;
    if (s.closed && s.oracle) {
      e["omega_oracle"] = s.oracle->omega;
      e["residual_oracle"] = s.oracle->residual;
      e["cross_defect"] = s.cross_defect;
    }
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  return j;
}

ordered_json suite_json(const SuiteResult& s) {
  ordered_json j;
  j["name"] = s.name;
  j["manifold"] = s.manifold;
  j["passed"] = s.passed;
  j["worst_defect"] = s.worst_defect;
  j["threshold"] = s.threshold;
  j["checks"] = s.checks;
  j["failures"] = s.failures;
  j["notes"] = s.notes;
  if (s.theorem) {
    j["coeffs"] = coeffs_json(s.theorem->coeffs);
    ordered_json inst = ordered_json::array();
    for (const auto& in : s.theorem->instances) {
      ordered_json e;
      e["field"] = in.field;
      e["lift"] = in.lift;
      e["verdict"] = to_string(in.verdict);
      e["oracle_verdict"] = in.oracle_verdict ? ordered_json(to_string(*in.oracle_verdict)) : nullptr;
      e["omega_stats"] = stats_json(in.stats);
      e["dOmega_dy_norm"] = in.domega_dy_max;
      e["vacuous"] = in.vacuous;
      e["violations"] = in.violations;
      inst.push_back(std::move(e));
    }
    j["instances"] = std::move(inst);
  }
  return j;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_csv(std::string& csv, const std::string& manifold, const ConformalReport& r) {
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    auto join = [](const std::vector<double>& v) {
      std::string out;
      for (std::size_t k = 0; k < v.size(); ++k) out += (k ? " " : "") + csv_number(v[k]);
      return out;
    };
    const ConformalFit& f = s.closed ? *s.closed : *s.oracle;
    csv += manifold + "," + r.field + "," + to_string(r.kind) + "," + csv_number(r.coeffs.a) + "," +
           csv_number(r.coeffs.b) + "," + csv_number(r.coeffs.c) + "," + std::to_string(i) + "," + join(s.point.x) +
           "," + join(s.point.y) + "," + csv_number(f.omega) + "," + csv_number(f.residual) + ",";
    if (s.closed && s.oracle) csv += csv_number(s.oracle->omega) + "," + csv_number(s.oracle->residual);
    else csv += ",";
    csv += "\n";
  }
}

struct RunState {
  explicit RunState(const RunConfig& c) : cfg(c) {}

  const RunConfig& cfg;
  ordered_json manifolds = ordered_json::array();
  ordered_json suites = ordered_json::array();
  std::vector<std::string> violations;
  std::string csv = "manifold,field,kind,a,b,c,sample,x,y,omega,residual,omega_oracle,residual_oracle\n";
};

void analyze_fields(RunState& st, const ManifoldEntry& e, const AnalysisGrid& grid) {
  ordered_json m;
  m["name"] = e.spec.name();
  m["dim"] = e.spec.dim();
  ordered_json fields = ordered_json::array();
  for (const FieldEntry& fe : e.fields) {
    const LiftField& f = fe.field;
    std::vector<ConformalReport> reps;
    try {
      reps = classify_many(f, e.spec, st.cfg.coeffs, grid, st.cfg.options);
    } catch (const CrossCheckError& err) {
      ordered_json j;
      j["field"] = f.name();
      j["kind"] = to_string(f.kind());
      j["error"] = "cross-check failure";
      j["message"] = err.what();
      fields.push_back(std::move(j));
      st.violations.push_back("cross-check failure on " + e.spec.name() + "/" + f.name() + ": " + err.what());
      continue;
    }
    std::optional<ordered_json> base;
    if (f.base()) {
      const BaseReport br = analyze_base(*f.base(), e.spec, st.cfg.grid, st.cfg.options.tolerances);
      base = ordered_json{{"field", br.field},
                          {"classification", to_string(br.classification)},
                          {"rho_stats", stats_json(br.stats)}};
    }
    for (const auto& r : reps) {
      ordered_json j = report_json(r);
      if (base) j["base"] = *base;
      if (fe.expect) {
        const bool met = *fe.expect == to_string(r.classification);
        j["expect"] = *fe.expect;
        j["expectation_met"] = met;
        if (!met)
          st.violations.push_back(e.spec.name() + "/" + r.field + ": expected " + *fe.expect + ", got " +
                                  to_string(r.classification));
      }
      append_csv(st.csv, e.spec.name(), r);
      fields.push_back(std::move(j));
    }
  }
  m["fields"] = std::move(fields);
  st.manifolds.push_back(std::move(m));
}

void push_suite(RunState& st, const SuiteResult& s) {
  if (!s.passed) st.violations.push_back("suite " + s.name + " failed on " + s.manifold);
  st.suites.push_back(suite_json(s));
}

void run_suites(RunState& st, const ManifoldEntry& e, const AnalysisGrid& grid,
                const std::vector<std::string>& names) {
  std::vector<LiftField> fields;
  for (const auto& fe : e.fields) fields.push_back(fe.field);
  const AnalysisOptions& opt = st.cfg.options;
  for (const std::string& name : names) {
    if (name == "lemma1") {
      push_suite(st, run_lemma1(e.spec, grid));
    } else if (name == "lemma3-duality") {
      push_suite(st, run_lemma3_duality(e.spec, fields, grid));
    } else if (name == "lemma4-oracle") {
      push_suite(st, run_lemma4_oracle(e.spec, fields, st.cfg.coeffs, grid, opt));
    } else if (name == "eq1") {
      push_suite(st, run_eq1(e.spec, e.base_fields, st.cfg.grid));
    } else if (name == "theorem1" || name == "theorem2") {
      for (const auto& c : st.cfg.coeffs) {
        if (!(c.a > 0.0 && c.discriminant() > 0.0)) {
          SuiteResult skip;
          skip.name = name;
          skip.manifold = e.spec.name();
          skip.notes.push_back("skipped coefficients outside a > 0, ac - b^2 > 0");
          st.suites.push_back(suite_json(skip));
          continue;
        }
        try {
          if (name == "theorem1") push_suite(st, run_theorem1(e.spec, c, e.base_fields, grid, opt));
          else push_suite(st, run_theorem2(e.spec, c, e.affine_fields, grid, opt));
        } catch (const CrossCheckError& err) {
          SuiteResult fail;
          fail.name = name;
          fail.manifold = e.spec.name();
          fail.passed = false;
          fail.failures.push_back(std::string("cross-check failure: ") + err.what());
          push_suite(st, fail);
        }
      }
    }
  }
}

RunResult finish(RunState& st, const std::string& command, const std::vector<std::string>& suites,
                 std::chrono::steady_clock::time_point start) {
  ordered_json rep;
  rep["schema"] = 1;
  rep["engine_version"] = engine_version();
  rep["command"] = command;
  rep["config"] = ordered_json::parse(st.cfg.raw_json);
  rep["requested_suites"] = suites;
  rep["manifolds"] = std::move(st.manifolds);
  rep["suites"] = std::move(st.suites);
  rep["summary"] = ordered_json{{"passed", st.violations.empty()}, {"violations", st.violations}};
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep["wall_time_s"] = wall;

  RunResult r;
  r.exit_code = st.violations.empty() ? ExitCode::pass : ExitCode::violation;
  r.report_json = rep.dump(2) + "\n";
  r.csv = std::move(st.csv);
  r.violations = std::move(st.violations);
  return r;
}

}  // namespace

RunResult run_analyze(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunState st(cfg);
  for (const ManifoldEntry& e : cfg.manifolds) {
    const AnalysisGrid grid = make_grid(e.spec, cfg.grid);
    analyze_fields(st, e, grid);
    run_suites(st, e, grid, cfg.suites);
  }
  return finish(st, "analyze", cfg.suites, start);
}

RunResult run_verify(const RunConfig& cfg, const std::vector<std::string>& requested) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> names;
  for (const auto& s : requested) names.push_back(canonical_suite_name(s));
  if (names.empty()) names = cfg.suites;
  if (names.empty()) throw ConfigError("no suites requested (use --suite or the config 'suites' list)");
  RunState st(cfg);
  for (const ManifoldEntry& e : cfg.manifolds) {
    const AnalysisGrid grid = make_grid(e.spec, cfg.grid);
    run_suites(st, e, grid, names);
  }
  return finish(st, "verify", names, start);
}

void write_outputs(const RunConfig& cfg, const RunResult& result) {
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
  };
  if (!cfg.report_path.empty()) write(cfg.report_path, result.report_json);
  if (!cfg.csv_path.empty()) write(cfg.csv_path, result.csv);
}

std::string catalog_listing() {
  std::string out;
  for (const auto& name : catalog_manifold_names()) {
    const ManifoldSpec m = catalog_manifold(name);
    ordered_json j;
    j["type"] = "manifold";
    j["name"] = name;
    j["dim"] = m.dim();
    ordered_json metric = ordered_json::array();
    for (int i = 0; i < m.dim(); ++i) {
      ordered_json row = ordered_json::array();
      for (int k = 0; k < m.dim(); ++k) row.push_back(m.metric_expr(i, k).to_string());
      metric.push_back(std::move(row));
    }
    j["metric"] = std::move(metric);
    j["domain_hint"] = ordered_json{{"lo", m.domain().lo}, {"hi", m.domain().hi}};
    out += j.dump() + "\n";
  }
  for (const auto& f : catalog_fields()) {
    ordered_json j;
    j["type"] = "field";
    j["manifold"] = f.manifold;
    j["name"] = f.name;
    j["components"] = f.components;
    j["known_class"] = to_string(f.known);
    if (f.known == KnownClass::homothetic) j["rho"] = f.rho;
    j["note"] = f.note;
    out += j.dump() + "\n";
  }
  for (const auto& f : catalog_affine_fields()) {
    ordered_json j;
    j["type"] = "affine_field";
    j["manifold"] = f.manifold;
    j["name"] = f.name;
    j["alpha"] = f.alpha;
    j["beta"] = f.beta;
    j["horiz"] = f.horiz;
    j["note"] = f.note;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace liftlab
