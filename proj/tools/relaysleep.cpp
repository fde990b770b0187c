#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "relaysleep/commands.hpp"
#include "relaysleep/error.hpp"

using namespace relaysleep;

namespace {

void apply_thread_env() {
  const char* env = std::getenv("RELAYSLEEP_THREADS");
  if (env == nullptr || *env == '\0') return;
  try {
    const int n = std::stoi(env);
    if (n > 0) omp_set_num_threads(n);
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring RELAYSLEEP_THREADS='" << env << "'\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();

  CLI::App app{"Relay sleep scheduling for energy-harvesting relay cells"};
  app.require_subcommand(1);

  RunOptions run;
  std::string run_algo = "reduced-dp";
  std::string run_out;
  double run_grid = std::nan("");
  auto* run_cmd = app.add_subcommand("run", "Solve one scenario and write per-slot results");
  run_cmd->add_option("--scenario", run.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--algorithm", run_algo, "exact-dp | reduced-dp | greedy | fixed-policy");
  run_cmd->add_option("--out", run_out, "Output directory")->required();
  run_cmd->add_option("--seed", run.seed, "Seed recorded in the summary");
  run_cmd->add_option("--grid-unit", run_grid, "Override battery grid unit (J)");

  SweepOptions sweep;
  std::string sweep_axis = "psi";
  std::vector<std::string> sweep_algos{"reduced-dp", "greedy"};
  std::string sweep_out;
  double sweep_grid = std::nan("");
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve a grid of scenarios and write the tradeoff table");
  sweep_cmd->add_option("--scenario", sweep.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--axis", sweep_axis, "traffic-scale | psi");
  sweep_cmd->add_option("--values", sweep.values, "Axis values")->required()->delimiter(',');
  sweep_cmd->add_option("--algorithms", sweep_algos, "Algorithms to compare")->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();
  sweep_cmd->add_option("--seed", sweep.seed, "Seed recorded in the summaries");
  sweep_cmd->add_option("--grid-unit", sweep_grid, "Override battery grid unit (J)");

  ValidateOptions val;
  std::string val_algo = "reduced-dp";
  std::string val_out;
  std::size_t val_slot = 1;
  double val_grid = std::nan("");
  auto* val_cmd = app.add_subcommand("validate", "Compare analytic blocking with simulation for one slot");
  val_cmd->add_option("--scenario", val.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  val_cmd->add_option("--slot", val_slot, "Slot index, starting at 1");
  val_cmd->add_option("--algorithm", val_algo, "Policy to validate");
  val_cmd->add_option("--replications", val.replications, "Independent replications");
  val_cmd->add_option("--arrivals", val.arrivals, "Arrivals per region over all replications");
  val_cmd->add_option("--seed", val.seed, "Master seed");
  val_cmd->add_option("--out", val_out, "Also write the report to this file");
  val_cmd->add_option("--grid-unit", val_grid, "Override battery grid unit (J)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code::schema_invalid;
  }

  try {
    if (*run_cmd) {
      run.algorithm = parse_algorithm(run_algo);
      run.out = run_out;
      if (!std::isnan(run_grid)) run.grid_unit_j = run_grid;
      return run_command(run, std::cerr);
    }
    if (*sweep_cmd) {
      sweep.axis = parse_axis(sweep_axis);
      for (const auto& a : sweep_algos) sweep.algorithms.push_back(parse_algorithm(a));
      sweep.out = sweep_out;
      if (!std::isnan(sweep_grid)) sweep.grid_unit_j = sweep_grid;
      return sweep_command(sweep, std::cerr);
    }
    if (val_slot == 0) {
      std::cerr << "error: --slot starts at 1\n";
      return exit_code::schema_invalid;
    }
    val.slot = val_slot - 1;
    val.algorithm = parse_algorithm(val_algo);
    val.out = val_out;
    if (!std::isnan(val_grid)) val.grid_unit_j = val_grid;
    return validate_command(val, std::cout, std::cerr);
  } catch (const Error& e) {
    // bad enum-like arguments
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::schema_invalid;
  }
}
