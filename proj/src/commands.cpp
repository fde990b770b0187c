#include "relaysleep/commands.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>

#include "relaysleep/error.hpp"
#include "relaysleep/results_io.hpp"
#include "relaysleep/scenario_io.hpp"

namespace relaysleep {

int exit_code_for(const Error& error) {
  switch (error.code()) {
    case Errc::schema_invalid:
    case Errc::dimension_mismatch:
      return exit_code::schema_invalid;
    case Errc::state_space_budget_exceeded:
      return exit_code::budget_exceeded;
    default:
      return exit_code::infeasible_scenario;
  }
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "traffic-scale") return SweepAxis::traffic_scale;
  if (name == "psi") return SweepAxis::psi;
  throw Error(Errc::invalid_argument, "unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis) { return axis == SweepAxis::psi ? "psi" : "traffic-scale"; }

Scenario apply_axis(const Scenario& base, SweepAxis axis, double value) {
  return axis == SweepAxis::psi ? with_psi(base, value) : scale_traffic(base, value);
}

std::vector<SweepCell> run_sweep(const Scenario& base, SweepAxis axis, const std::vector<double>& values,
                                 const std::vector<Algorithm>& algorithms, Execution exec) {
  require(values.size() >= 2, Errc::invalid_argument, "a sweep needs at least two values");
  require(!algorithms.empty(), Errc::invalid_argument, "a sweep needs at least one algorithm");
  const std::size_t cells = values.size() * algorithms.size();
  std::vector<SweepCell> out(cells);
  std::vector<std::exception_ptr> errors(cells);

  auto solve_cell = [&](std::size_t c) {
    try {
      SweepCell& cell = out[c];
      cell.value = values[c / algorithms.size()];
      cell.algorithm = algorithms[c % algorithms.size()];
      const SystemModel model(apply_axis(base, axis, cell.value));
      cell.policy = solve(model, cell.algorithm, Execution::serial);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t c = 0; c < cells; ++c) solve_cell(c);
  } else {
    for (std::size_t c = 0; c < cells; ++c) solve_cell(c);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

namespace {

Scenario load_with_overrides(const std::filesystem::path& path, const std::optional<double>& grid_unit) {
  Scenario s = load_scenario(path);
  if (grid_unit) {
    require(*grid_unit > 0.0, Errc::schema_invalid, "--grid-unit must be positive");
    s.battery.grid_unit_j = *grid_unit;
  }
  return s;
}

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return exit_code::infeasible_scenario;
  }
}

std::string format_value_dir(double v) {
  std::string s = format_number(v);
  for (char& c : s) {
    if (c == '+') c = 'p';
  }
  return s;
}

}  // namespace

int run_command(const RunOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const Scenario scenario = load_with_overrides(options.scenario, options.grid_unit_j);
    const auto start = std::chrono::steady_clock::now();
    const SystemModel model(scenario);
    const SleepPolicy policy = solve(model, options.algorithm);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string csv = slots_csv(policy);
    const std::string summary = summary_json(summarize(policy, wall, options.seed));
    write_atomic(options.out / "slots.csv", csv);
    write_atomic(options.out / "summary.json", summary);
    log << to_string(options.algorithm) << ": cost " << policy.total_cost << ", mean grid power "
        << policy.mean_grid_power_w() << " W, mean blocking " << policy.mean_blocking << '\n';
    return exit_code::ok;
  });
}

int sweep_command(const SweepOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    require(options.values.size() >= 2, Errc::schema_invalid, "--values needs at least two entries");
    const Scenario scenario = load_with_overrides(options.scenario, options.grid_unit_j);
    const std::vector<SweepCell> cells = run_sweep(scenario, options.axis, options.values, options.algorithms);

    std::vector<TradeoffRow> rows;
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (const SweepCell& cell : cells) {
      rows.push_back({cell.value, std::string(to_string(cell.algorithm)), cell.policy.mean_grid_power_w(),
                      cell.policy.mean_blocking});
      const auto dir = options.out / "runs" / (to_string(options.axis) + "=" + format_value_dir(cell.value)) /
                       std::string(to_string(cell.algorithm));
      files.emplace_back(dir / "slots.csv", slots_csv(cell.policy));
      files.emplace_back(dir / "summary.json", summary_json(summarize(cell.policy, 0.0, options.seed)));
    }
    for (const auto& [path, contents] : files) write_atomic(path, contents);
    write_atomic(options.out / "tradeoff.csv", tradeoff_csv(rows));
    log << "sweep: " << cells.size() << " runs written to " << options.out.string() << '\n';
    return exit_code::ok;
  });
}

std::string validation_report(const SlotBlockingEstimate& estimate) {
  std::ostringstream out;
  out << "region,analytic,empirical,std_error,z\n";
  for (const RegionEstimate& r : estimate.regions) {
    out << r.region << ',' << format_number(r.analytic) << ',' << format_number(r.empirical) << ','
        << format_number(r.std_error) << ',' << format_number(r.z()) << '\n';
  }
  return out.str();
}

int validate_command(const ValidateOptions& options, std::ostream& report, std::ostream& log) {
  return guarded(log, [&] {
    const Scenario scenario = load_with_overrides(options.scenario, options.grid_unit_j);
    const SystemModel model(scenario);
    require(options.slot < model.slot_count(), Errc::schema_invalid,
            "slot " + std::to_string(options.slot + 1) + " outside 1.." + std::to_string(model.slot_count()));
    require(options.replications >= 2, Errc::schema_invalid, "--replications must be at least 2");
    const SleepPolicy policy = solve(model, options.algorithm);

    SlotSimOptions sim;
    sim.replications = options.replications;
    sim.arrivals_per_replication = std::max<std::uint64_t>(1, options.arrivals / static_cast<std::uint64_t>(options.replications));
    sim.seed = options.seed;
    const SlotBlockingEstimate est = simulate_slot_blocking(model, options.slot, policy.sleep[options.slot], sim);
    const std::string text = validation_report(est);
    report << text;
    if (!options.out.empty()) write_atomic(options.out, text);

    bool ok = true;
    for (const RegionEstimate& r : est.regions) ok = ok && std::abs(r.z()) <= 4.0;
    if (!ok) log << "validate: |z| > 4 in at least one region\n";
    return ok ? exit_code::ok : exit_code::validation_failed;
  });
}

}  // namespace relaysleep
