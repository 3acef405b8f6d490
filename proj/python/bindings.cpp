#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "liftlab/liftlab.hpp"

namespace py = pybind11;
using namespace liftlab;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows rows(const MatrixD& m) {
  Rows out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

TMPoint tm_point(const ManifoldSpec& spec, const std::vector<double>& x, const std::vector<double>& y) {
  if (static_cast<int>(x.size()) != spec.dim() || static_cast<int>(y.size()) != spec.dim())
    throw GeometryError("point must have " + std::to_string(spec.dim()) + " base and fiber coordinates");
  return TMPoint{x, y};
}

void check_base(const ManifoldSpec& spec, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != spec.dim())
    throw GeometryError("point must have " + std::to_string(spec.dim()) + " coordinates");
}

LiftMetricCoeffs coeffs(const std::vector<double>& c) {
  if (c.size() != 3) throw ConfigError("metric coefficients must be (a, b, c)");
  return {c[0], c[1], c[2]};
}

LiftField lift_of(const BaseField& v, const ManifoldSpec& spec, const std::string& kind) {
  if (kind == "complete") return complete_lift(v, spec);
  if (kind == "horizontal") return horizontal_lift(v, spec);
  if (kind == "vertical") return vertical_lift(v, spec);
  throw ConfigError("unknown lift kind '" + kind + "'");
}

py::dict stats_dict(const OmegaStats& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["stddev"] = s.stddev;
  d["min"] = s.min;
  d["max"] = s.max;
  d["max_abs"] = s.max_abs;
  d["max_residual"] = s.max_residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_liftlab, m) {
  m.doc() = "Conformal analysis of lifted vector fields on tangent bundles";

  auto base = py::register_exception<Error>(m, "LiftlabError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<CrossCheckError>(m, "CrossCheckError", base.ptr());

  py::class_<Expr>(m, "Expr")
      .def(py::init([](const std::string& src, int dim) { return parse(src, dim); }), py::arg("source"),
           py::arg("dim"))
      .def("eval", [](const Expr& e, const std::vector<double>& p) { return eval(e, p); }, py::arg("point"))
      .def(
          "derivative",
          [](const Expr& e, const std::vector<double>& p, int i, std::optional<int> j) {
            return j ? derivative(e, p, i, *j) : derivative(e, p, i);
          },
          py::arg("point"), py::arg("i"), py::arg("j") = py::none())
      .def("__str__", &Expr::to_string)
      .def("__repr__", [](const Expr& e) { return "Expr('" + e.to_string() + "')"; })
      .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; });

  py::class_<ManifoldSpec>(m, "Manifold")
      .def(py::init([](const std::string& name, const std::vector<std::vector<std::string>>& metric,
                       std::optional<std::vector<double>> lo, std::optional<std::vector<double>> hi) {
             std::optional<DomainBox> box;
             if (lo || hi) {
               if (!lo || !hi) throw ConfigError("domain needs both lo and hi");
               box = DomainBox{*lo, *hi};
             }
             return ManifoldSpec::from_text(name, metric, box);
           }),
           py::arg("name"), py::arg("metric"), py::arg("lo") = py::none(), py::arg("hi") = py::none())
      .def_static("catalog", &catalog_manifold, py::arg("name"), py::arg("radius") = 1.0)
      .def_property_readonly("name", &ManifoldSpec::name)
      .def_property_readonly("dim", &ManifoldSpec::dim)
      .def_property_readonly("domain", [](const ManifoldSpec& s) { return py::make_tuple(s.domain().lo, s.domain().hi); })
      .def("__repr__", [](const ManifoldSpec& s) { return "Manifold('" + s.name() + "')"; });

  py::class_<LiftField>(m, "Field")
      .def_property_readonly("name", &LiftField::name)
      .def_property_readonly("kind", [](const LiftField& f) { return to_string(f.kind()); })
      .def_property_readonly("dim", &LiftField::dim)
      .def(
          "coordinate_components",
          [](const LiftField& f, const ManifoldSpec& spec, const std::vector<double>& x, const std::vector<double>& y) {
            return coordinate_components(f, spec, tm_point(spec, x, y));
          },
          py::arg("manifold"), py::arg("x"), py::arg("y"))
      .def("__repr__", [](const LiftField& f) { return "Field('" + f.name() + "', " + to_string(f.kind()) + ")"; });

  m.def(
      "lift",
      [](const ManifoldSpec& spec, const std::vector<std::string>& components, const std::string& kind,
         const std::string& name) {
        return lift_of(BaseField::from_text(name, components, spec.dim()), spec, kind);
      },
      py::arg("manifold"), py::arg("components"), py::arg("kind") = "complete", py::arg("name") = "V",
      "Complete, horizontal or vertical lift of a base vector field given as expression text.");
  m.def(
      "catalog_lift",
      [](const ManifoldSpec& spec, const std::string& field, const std::string& kind) {
        return lift_of(catalog_base_field(spec.name(), field), spec, kind);
      },
      py::arg("manifold"), py::arg("field"), py::arg("kind") = "complete");
  m.def("catalog_fields", &catalog_lift_fields, py::arg("manifold"),
        "Every complete, horizontal and vertical lift of the catalog fields plus the affine catalog.");
  m.def(
      "affine_field",
      [](const ManifoldSpec& spec, const std::vector<std::vector<std::string>>& alpha,
         const std::vector<std::string>& beta, const std::vector<std::string>& horiz, const std::string& name) {
        LiftField f = affine_fiber_field(spec, AffineFiberField::from_text(alpha, beta, horiz, spec.dim()));
        f.set_name(name);
        return f;
      },
      py::arg("manifold"), py::arg("alpha"), py::arg("beta"), py::arg("horiz"), py::arg("name") = "affine");
  m.def(
      "general_field",
      [](const ManifoldSpec& spec, const std::vector<std::string>& horiz, const std::vector<std::string>& vert,
         const std::string& name) {
        LiftField f = general_field(spec, horiz, vert);
        f.set_name(name);
        return f;
      },
      py::arg("manifold"), py::arg("horiz"), py::arg("vert"), py::arg("name") = "general");

  m.def(
      "metric",
      [](const ManifoldSpec& spec, const std::vector<double>& x) {
        check_base(spec, x);
        return rows(metric_at(spec, x).g);
      },
      py::arg("manifold"), py::arg("x"));
  m.def(
      "christoffel",
      [](const ManifoldSpec& spec, const std::vector<double>& x) {
        check_base(spec, x);
        const ChristoffelValue v = christoffel(spec, x);
        const int n = spec.dim();
        std::vector<Rows> out(static_cast<std::size_t>(n), Rows(n, std::vector<double>(n)));
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out[k][i][j] = v.gamma(k, i, j);
        return out;
      },
      py::arg("manifold"), py::arg("x"), "Gamma[k][i][j] = Gamma^k_ij.");
  m.def(
      "curvature",
      [](const ManifoldSpec& spec, const std::vector<double>& x) {
        check_base(spec, x);
        const CurvatureValue v = curvature(spec, x);
        py::dict d;
        d["tensor"] = v.k.data;
        d["dim"] = spec.dim();
        d["sectional"] = v.sectional ? py::object(py::float_(*v.sectional)) : py::object(py::none());
        return d;
      },
      py::arg("manifold"), py::arg("x"), "Flat K_{ijk}^m in row-major (i, j, k, m) order.");
  m.def(
      "nonlinear_connection",
      [](const ManifoldSpec& spec, const std::vector<double>& x, const std::vector<double>& y) {
        return rows(nonlinear_connection(spec, tm_point(spec, x, y)));
      },
      py::arg("manifold"), py::arg("x"), py::arg("y"), "N[i][j] = N_i^j.");

  m.def(
      "signature",
      [](const std::vector<double>& c) {
        switch (signature_classify(coeffs(c))) {
          case Signature::riemannian:
            return std::string("riemannian");
          case Signature::pseudo:
            return std::string("pseudo-riemannian");
          default:
            return std::string("singular");
        }
      },
      py::arg("coeffs"));
  m.def(
      "lift_metric",
      [](const ManifoldSpec& spec, const std::vector<double>& c, const std::vector<double>& x,
         const std::vector<double>& y) {
        const LiftMetricValue v = lift_metric(spec, coeffs(c), tm_point(spec, x, y));
        py::dict d;
        d["adapted"] = rows(v.adapted_blocks);
        d["coordinate"] = rows(v.coordinate_matrix);
        d["signature"] = v.signature_report();
        return d;
      },
      py::arg("manifold"), py::arg("coeffs"), py::arg("x"), py::arg("y"));

  m.def(
      "lie_derivative",
      [](const LiftField& f, const ManifoldSpec& spec, const std::vector<double>& c, const std::vector<double>& x,
         const std::vector<double>& y, const std::string& method) {
        const TMPoint p = tm_point(spec, x, y);
        if (method == "closed_form") return rows(to_coordinate_basis(lie_gtilde(f, spec, coeffs(c), p), spec).matrix);
        if (method == "flow_oracle") return rows(numeric_lie_derivative(f, spec, coeffs(c), p).matrix);
        throw ConfigError("method must be closed_form or flow_oracle");
      },
      py::arg("field"), py::arg("manifold"), py::arg("coeffs"), py::arg("x"), py::arg("y"),
      py::arg("method") = "closed_form", "L_X of the lift metric in the coordinate basis.");

  m.def(
      "classify",
      [](const LiftField& f, const ManifoldSpec& spec, const std::vector<double>& c, int count, std::uint64_t seed,
         const std::string& method, int threads) {
        GridSpec g;
        g.count = count;
        g.seed = seed;
        AnalysisOptions opt;
        opt.method = method_from_string(method);
        opt.threads = threads;
        ConformalReport r;
        {
          py::gil_scoped_release release;
          r = classify(f, spec, coeffs(c), make_grid(spec, g), opt);
        }
        py::dict d;
        d["field"] = r.field;
        d["kind"] = to_string(r.kind);
        d["classification"] = to_string(r.classification);
        d["stats"] = stats_dict(r.stats);
        d["homothety"] = r.homothety;
        d["domega_dx_max"] = r.domega_dx_max;
        d["domega_dy_max"] = r.domega_dy_max;
        d["max_cross_defect"] = r.max_cross_defect;
        d["samples"] = r.samples.size();
        return d;
      },
      py::arg("field"), py::arg("manifold"), py::arg("coeffs"), py::arg("count") = 30, py::arg("seed") = 1,
      py::arg("method") = "both", py::arg("threads") = 0);

  m.def(
      "run_config",
      [](const std::string& json_text, const std::string& command, const std::vector<std::string>& suites) {
        const RunConfig cfg = parse_config(json_text);
        RunResult r;
        {
          py::gil_scoped_release release;
          if (command == "analyze")
            r = run_analyze(cfg);
          else if (command == "verify")
            r = run_verify(cfg, suites);
          else
            throw ConfigError("command must be analyze or verify");
        }
        return py::make_tuple(static_cast<int>(r.exit_code), r.report_json);
      },
      py::arg("config"), py::arg("command") = "analyze", py::arg("suites") = std::vector<std::string>{},
      "Runs a JSON config; returns (exit_code, report_json).");
  m.def("catalog_listing", &catalog_listing);
  m.def("catalog_manifolds", &catalog_manifold_names);
  m.attr("__version__") = engine_version();
}
