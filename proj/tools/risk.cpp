// risk: scenario risk reports and self-checks.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mrisk/commands.hpp"

namespace {

mrisk::ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return mrisk::ReportFormat::csv;
  if (s == "json") return mrisk::ReportFormat::json;
  return mrisk::ReportFormat::text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monetary risk measures on finite scenario sets"};
  app.require_subcommand(1);

  std::string scenarios_path;
  std::string config_path;

  auto* report = app.add_subcommand("report", "Evaluate configured measures on every position");
  std::string format = "text";
  report->add_option("file", scenarios_path, "Scenario file (.csv or .json)")->required();
  report->add_option("--config", config_path, "Measure configuration (json)")->required();
  report->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "text"}));

  auto* axioms = app.add_subcommand("check-axioms", "Randomized axiom checks against expected profiles");
  std::optional<std::uint64_t> seed;
  std::size_t trials = 10000;
  std::optional<std::size_t> acceptance_trials;
  axioms->add_option("--seed", seed, "RNG seed (default 42, or the config's seed)");
  axioms->add_option("--trials", trials, "Trials per measure");
  axioms->add_option("--acceptance-trials", acceptance_trials,
                     "Trials per acceptance-set check (default min(trials, 1000))");
  axioms->add_option("--config", config_path, "Measures and expected profiles (json)");

  auto* dual = app.add_subcommand("dual-check", "Primal versus dual value for every position");
  std::optional<double> tol;
  dual->add_option("file", scenarios_path, "Scenario file (.csv or .json)")->required();
  dual->add_option("--config", config_path, "Measure configuration (json)")->required();
  dual->add_option("--tol", tol, "Gap tolerance (default: config tolerance)");

  auto* dom = app.add_subcommand("dominance", "FSD/SSD verdicts for a pair of positions");
  std::string xname, yname;
  dom->add_option("file", scenarios_path, "Scenario file (.csv or .json)")->required();
  dom->add_option("--x", xname, "First position")->required();
  dom->add_option("--y", yname, "Second position")->required();
  dom->add_option("--config", config_path, "Optional config supplying an alpha grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mrisk::kExitUsage;
  }

  try {
    if (*report) {
      return mrisk::run_report(mrisk::ingest(scenarios_path), mrisk::load_config(config_path),
                               parse_format(format), std::cout, std::cerr);
    }
    if (*axioms) {
      mrisk::AxiomRunOptions opts;
      std::vector<mrisk::NamedMeasure> measures;
      if (!config_path.empty()) {
        mrisk::ReportConfig config = mrisk::load_config(config_path);
        measures = std::move(config.measures);
        opts.seed = config.seed;
      } else {
        measures = mrisk::default_axiom_measures();
      }
      if (seed) opts.seed = *seed;
      opts.trials = trials;
      opts.acceptance_trials = acceptance_trials ? *acceptance_trials : std::min<std::size_t>(trials, 1000);
      return mrisk::run_check_axioms(measures, opts, std::cout);
    }
    if (*dual) {
      const mrisk::ReportConfig config = mrisk::load_config(config_path);
      return mrisk::run_dual_check(mrisk::ingest(scenarios_path), config,
                                   tol ? *tol : config.tolerance, std::cout);
    }
    if (*dom) {
      std::vector<double> grid;
      if (!config_path.empty()) grid = mrisk::load_config(config_path).alpha_grid;
      return mrisk::run_dominance(mrisk::ingest(scenarios_path), xname, yname, grid, std::cout,
                                  std::cerr);
    }
  } catch (const mrisk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mrisk::kExitUsage;
  }
  return mrisk::kExitUsage;
}
