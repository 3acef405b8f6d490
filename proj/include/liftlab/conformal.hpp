#pragma once

// Conformal classification of vector fields on (TM, gt) over a sample grid, with the
// closed-form formulas cross-checked against the flow oracle at every sample.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftlab/catalog.hpp"
#include "liftlab/flow_oracle.hpp"

namespace liftlab {

struct Tolerances {
  double killing_tol = 1e-6;
  double residual_tol = 1e-4;
  double constancy_tol = 1e-5;
  double cross_check_tol = 1e-4;
};

enum class Classification {
  killing,
  homothetic,
  conformal_inessential,
  conformal_essential,
  conformal,  // conformal, with Omega depending on both x and y (or a base field)
  non_conformal,
};

std::string to_string(Classification c);
bool is_conformal(Classification c);

enum class Method { closed_form, flow_oracle, both };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct GridSpec {
  std::string mode = "random";  // "random" or "lattice"
  int count = 30;
  std::uint64_t seed = 1;
  double fiber_lo = -1.0;
  double fiber_hi = 1.0;
  /// Fraction of the chart box trimmed from each side, so short flows stay inside.
  double margin = 0.05;
};

struct AnalysisGrid {
  GridSpec spec;
  std::vector<TMPoint> points;
};

AnalysisGrid make_grid(const ManifoldSpec& manifold, const GridSpec& g);

/// Points of M only (y empty).
std::vector<std::vector<double>> make_base_grid(const ManifoldSpec& manifold, const GridSpec& g);

struct ConformalFit {
  double omega = 0.0;
  double residual = 0.0;
};

/// Omega = trace(gt^{-1} L) / (2 dim), residual = |L - 2 Omega gt|_F / |gt|_F.
ConformalFit extract_conformal_factor(const MatrixD& lie, const MatrixD& gt);
ConformalFit extract_conformal_factor(const BilinearFormValue& lie, const LiftMetricValue& gt);

struct AnalysisOptions {
  Method method = Method::both;
  OracleOptions oracle;
  ClosedFormOptions closed_form;
  Tolerances tolerances;
  /// 0: LIFTLAB_THREADS, else hardware concurrency.
  int threads = 0;
};

struct ConformalSample {
  TMPoint point;
  std::optional<ConformalFit> closed;
  std::optional<ConformalFit> oracle;
  double cross_defect = 0.0;
  std::vector<double> domega_dx;  // closed form, when available
  std::vector<double> domega_dy;
};

struct OmegaStats {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  double max_abs = 0.0;
  double max_residual = 0.0;
};

struct ConformalReport {
  std::string field;
  LiftKind kind = LiftKind::general;
  LiftMetricCoeffs coeffs;
  Method method = Method::both;
  Tolerances tolerances;
  std::vector<ConformalSample> samples;

  Classification classification = Classification::non_conformal;
  std::optional<Classification> oracle_classification;
  OmegaStats stats;  // from the primary method (closed form unless oracle-only)
  std::optional<OmegaStats> oracle_stats;
  double homothety = 0.0;      // mean Omega when homothetic
  double domega_dx_max = 0.0;  // max over samples of |dOmega/dx|
  double domega_dy_max = 0.0;
  double max_cross_defect = 0.0;
};

/// Decides a class from per-sample Omega and residuals plus derivative magnitudes.
Classification decide_class(const OmegaStats& stats, double domega_dx_max, double domega_dy_max,
                            const Tolerances& tol);

OmegaStats omega_stats(const std::vector<ConformalFit>& fits);

/// Throws CrossCheckError when both methods run and disagree beyond cross_check_tol.
ConformalReport classify(const LiftField& x, const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                         const AnalysisGrid& grid, const AnalysisOptions& opt = {});

/// Several coefficient sets for one field; flows are computed once per sample.
std::vector<ConformalReport> classify_many(const LiftField& x, const ManifoldSpec& spec,
                                           const std::vector<LiftMetricCoeffs>& coeffs, const AnalysisGrid& grid,
                                           const AnalysisOptions& opt = {});

/// Relative disagreement of the two methods at one point (coordinate basis).
double cross_check_defect(const MatrixD& closed_coordinate, const MatrixD& oracle, const MatrixD& gt_coordinate);

struct BaseReport {
  std::string field;
  Classification classification = Classification::non_conformal;
  OmegaStats stats;  // of rho
  std::vector<std::vector<double>> points;
  std::vector<ConformalFit> fits;
};

/// rho = trace(g^{-1} L_V g) / (2n) on M.
BaseReport analyze_base(const BaseField& v, const ManifoldSpec& spec, const GridSpec& grid,
                        const Tolerances& tol = {});

// ---------------------------------------------------------------------------

struct TheoremInstance {
  std::string field;
  std::string lift;
  Classification verdict = Classification::non_conformal;
  std::optional<Classification> oracle_verdict;
  OmegaStats stats;
  double domega_dy_max = 0.0;
  bool vacuous = false;
  std::vector<std::string> violations;
};

struct TheoremReport {
  std::string name;
  bool passed = true;
  LiftMetricCoeffs coeffs;
  std::vector<TheoremInstance> instances;
  double worst_defect = 0.0;
  std::vector<std::string> notes;
};

/// Complete, horizontal and vertical lifts: X^C conformal forces constant Omega (and
/// dOmega/dy = 0); X^H or X^V conformal forces Omega = 0.
TheoremReport verify_theorem1(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                              const std::vector<BaseField>& fields, const AnalysisGrid& grid,
                              const AnalysisOptions& opt = {});

/// Fiber-preserving fields: conformal forces Killing or homothetic.
TheoremReport verify_theorem2(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                              const std::vector<std::pair<std::string, AffineFiberField>>& fields,
                              const AnalysisGrid& grid, const AnalysisOptions& opt = {});

int resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers; rethrows the failure
/// with the lowest index.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace liftlab
