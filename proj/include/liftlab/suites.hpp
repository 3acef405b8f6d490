#pragma once

// Verification suites over a manifold and a sample grid. Each returns pass/fail with
// the worst defect seen.

#include <optional>
#include <string>
#include <vector>

#include "liftlab/conformal.hpp"

namespace liftlab {

struct SuiteResult {
  std::string name;
  std::string manifold;
  bool passed = true;
  double worst_defect = 0.0;
  double threshold = 0.0;
  int checks = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  std::optional<TheoremReport> theorem;
};

/// lemma1, lemma3-duality, lemma4-oracle, theorem1, theorem2, eq1.
const std::vector<std::string>& suite_names();

/// Resolves aliases ("lemma3", "lemma4"); throws ConfigError on unknown names.
std::string canonical_suite_name(const std::string& name);

/// Closed-form frame brackets against numeric commutators; [X_ibar, X_jbar] must be exactly 0.
SuiteResult run_lemma1(const ManifoldSpec& spec, const AnalysisGrid& grid, double tol = 1e-6);

/// Lie derivatives of the adapted frame and coframe preserve the pairing.
SuiteResult run_lemma3_duality(const ManifoldSpec& spec, const std::vector<LiftField>& fields,
                               const AnalysisGrid& grid, double tol = 1e-9);

/// Closed-form L_X gt against the flow oracle, relative defect per point.
SuiteResult run_lemma4_oracle(const ManifoldSpec& spec, const std::vector<LiftField>& fields,
                              const std::vector<LiftMetricCoeffs>& coeffs, const AnalysisGrid& grid,
                              const AnalysisOptions& opt = {}, double tol = 1e-5);

/// Partial-derivative and covariant forms of the base Lie derivative on cov2, (1,1)
/// and connection-difference (1,2) tensors.
SuiteResult run_eq1(const ManifoldSpec& spec, const std::vector<BaseField>& fields, const GridSpec& grid,
                    double tol = 1e-9);

SuiteResult run_theorem1(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                         const std::vector<BaseField>& fields, const AnalysisGrid& grid,
                         const AnalysisOptions& opt = {});

SuiteResult run_theorem2(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                         const std::vector<std::pair<std::string, AffineFiberField>>& fields,
                         const AnalysisGrid& grid, const AnalysisOptions& opt = {});

/// Manifolds whose connection is differenced against `spec` in the eq1 suite.
std::vector<ManifoldSpec> eq1_partners(const ManifoldSpec& spec);

}  // namespace liftlab
