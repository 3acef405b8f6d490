// liftlab: analyze lifted vector fields on (TM, gt) from a JSON config.
//
//   liftlab analyze <config.json> [--perturb-closed-form]
//   liftlab verify <config.json> --suite <name> [--suite <name>...]
//   liftlab catalog
//
// Exit codes: 0 pass, 1 config or engine error, 2 violation.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liftlab/config.hpp"

namespace {

int emit(const liftlab::RunConfig& cfg, const liftlab::RunResult& result) {
  liftlab::write_outputs(cfg, result);
  if (cfg.report_path.empty()) std::cout << result.report_json;
  for (const auto& v : result.violations) std::cerr << "violation: " << v << "\n";
  return static_cast<int>(result.exit_code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lift-metric geometry engine on tangent bundles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", liftlab::engine_version());

  std::string config_path;
  bool perturb = false;
  std::vector<std::string> suites;

  auto* analyze = app.add_subcommand("analyze", "Classify the configured fields and run the config's suites");
  analyze->add_option("config", config_path, "JSON config file")->required();
  analyze->add_flag("--perturb-closed-form", perturb, "Test hook: corrupt the closed-form Lie derivative");

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("config", config_path, "JSON config file")->required();
  verify->add_option("--suite", suites, "Suite name (repeatable)")->take_all();
  verify->add_flag("--perturb-closed-form", perturb, "Test hook: corrupt the closed-form Lie derivative");

  auto* catalog = app.add_subcommand("catalog", "List built-in manifolds and fields as JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (catalog->parsed()) {
      std::cout << liftlab::catalog_listing();
      return 0;
    }
    liftlab::RunConfig cfg = liftlab::load_config(config_path);
    cfg.options.closed_form.perturb = perturb;
    if (analyze->parsed()) return emit(cfg, liftlab::run_analyze(cfg));
    return emit(cfg, liftlab::run_verify(cfg, suites));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
