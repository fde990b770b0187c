#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relaysleep/error.hpp"
#include "relaysleep/mcoracle.hpp"
#include "relaysleep/policy.hpp"
#include "relaysleep/scenario.hpp"

namespace relaysleep {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation_failed = 1;
inline constexpr int schema_invalid = 2;
inline constexpr int budget_exceeded = 3;
inline constexpr int infeasible_scenario = 4;
}  // namespace exit_code

/// Maps a library error to the CLI exit code.
int exit_code_for(const Error& error);

enum class SweepAxis { traffic_scale, psi };
SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

/// Scenario with the sweep axis set to `value`.
Scenario apply_axis(const Scenario& base, SweepAxis axis, double value);

struct SweepCell {
  double value = 0.0;
  Algorithm algorithm = Algorithm::reduced_dp;
  SleepPolicy policy;
};

/// Solves every (value, algorithm) cell. Cells run concurrently; the result
/// order is values-major, algorithms-minor regardless of scheduling.
std::vector<SweepCell> run_sweep(const Scenario& base, SweepAxis axis, const std::vector<double>& values,
                                 const std::vector<Algorithm>& algorithms, Execution exec = Execution::parallel);

struct RunOptions {
  std::filesystem::path scenario;
  Algorithm algorithm = Algorithm::reduced_dp;
  std::filesystem::path out;
  std::uint64_t seed = 1;
  std::optional<double> grid_unit_j;
};

struct SweepOptions {
  std::filesystem::path scenario;
  SweepAxis axis = SweepAxis::psi;
  std::vector<double> values;
  std::vector<Algorithm> algorithms;
  std::filesystem::path out;
  std::uint64_t seed = 1;
  std::optional<double> grid_unit_j;
};

struct ValidateOptions {
  std::filesystem::path scenario;
  std::size_t slot = 0;  ///< zero-based
  int replications = 1000;
  std::uint64_t arrivals = 100'000;  ///< total per region, split over replications
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::reduced_dp;
  std::filesystem::path out;  ///< optional report file
  std::optional<double> grid_unit_j;
};

/// Writes <out>/slots.csv and <out>/summary.json.
int run_command(const RunOptions& options, std::ostream& log);

/// Writes <out>/tradeoff.csv and one run directory per cell.
int sweep_command(const SweepOptions& options, std::ostream& log);

/// Prints analytic vs simulated blocking for one slot; exit 1 if any |z| > 4.
int validate_command(const ValidateOptions& options, std::ostream& report, std::ostream& log);

std::string validation_report(const SlotBlockingEstimate& estimate);

}  // namespace relaysleep
