#pragma once

// JSON run configuration and report generation behind the command line tool.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftlab/suites.hpp"

namespace liftlab {

struct FieldEntry {
  LiftField field;
  std::optional<std::string> expect;  // expected classification
};

struct ManifoldEntry {
  ManifoldSpec spec;
  std::vector<FieldEntry> fields;
  std::vector<BaseField> base_fields;
  std::vector<std::pair<std::string, AffineFiberField>> affine_fields;
};

struct RunConfig {
  std::string raw_json;  // canonical echo of the input
  std::vector<ManifoldEntry> manifolds;
  std::vector<LiftMetricCoeffs> coeffs;
  GridSpec grid;
  AnalysisOptions options;
  std::vector<std::string> suites;
  std::string report_path;
  std::string csv_path;
};

/// Throws ConfigError (or ParseError for bad expressions) on invalid input.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

enum class ExitCode { pass = 0, error = 1, violation = 2 };

struct RunResult {
  ExitCode exit_code = ExitCode::pass;
  std::string report_json;
  std::string csv;
  std::vector<std::string> violations;
};

/// Classifies every configured field, then runs the config's suites.
RunResult run_analyze(const RunConfig& cfg);

/// Runs the named suites (config suites when `suites` is empty).
RunResult run_verify(const RunConfig& cfg, const std::vector<std::string>& suites);

/// Writes report_json / csv to the configured paths (no-op for empty paths).
void write_outputs(const RunConfig& cfg, const RunResult& result);

/// One JSON object per line: manifolds, base fields and affine fields.
std::string catalog_listing();

std::string engine_version();

}  // namespace liftlab
