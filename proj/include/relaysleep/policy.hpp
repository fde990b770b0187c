#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "relaysleep/system_model.hpp"

namespace relaysleep {

enum class Algorithm { exact_dp, reduced_dp, greedy, fixed_policy };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

/// Serial loops or OpenMP data-parallel loops. Both produce bit-identical
/// results; `serial` exists for testing and benchmarking.
enum class Execution { serial, parallel };

struct SlotMetrics {
  std::vector<double> sleep;
  std::vector<double> battery_start_j;
  std::vector<double> battery_end_j;
  double bs_energy_j = 0.0;
  std::vector<double> rs_energy_j;
  double bs_blocking = 0.0;
  std::vector<double> rs_blocking;
  double system_blocking = 0.0;
  double lambda0_eff = 0.0;
  double gamma0 = 0.0;
  double bs_used_hz = 0.0;
  double bs_limit_hz = 0.0;
  bool bs_saturated = false;
  bool rs_saturated = false;
  double stage_cost = 0.0;
  std::vector<BatteryStep> ledger;
  /// Requested sleep ratio was infeasible and was raised to the smallest
  /// affordable one.
  std::vector<bool> clamped;
  std::vector<bool> forced_sleep;
  std::vector<double> deficit_j;
};

struct SleepPolicy {
  Algorithm algorithm = Algorithm::fixed_policy;
  SleepMatrix sleep;                 ///< I x N, as applied
  std::vector<SlotMetrics> slots;
  double total_cost = 0.0;
  double total_grid_energy_j = 0.0;
  double total_length_s = 0.0;
  double mean_blocking = 0.0;
  bool any_clamped = false;

  double mean_grid_power_w() const { return total_length_s > 0 ? total_grid_energy_j / total_length_s : 0.0; }
};

/// Tabular cost-to-go. For the exact DP there is one table over the joint
/// battery grid (mixed radix, relay 0 fastest); the reduced DP keeps one
/// table per relay.
struct ValueTable {
  std::vector<std::vector<double>> value;       ///< [stage][state]
  std::vector<std::vector<double>> best_sleep;  ///< [stage][state * relays + n]
  int relays = 0;
};

struct DpSolution {
  ValueTable table;
  SleepPolicy policy;
};

struct ReducedDpSolution {
  std::vector<ValueTable> tables;  ///< one per relay
  SleepPolicy policy;
};

/// Stage cost of the joint system for the given battery levels (grid
/// indices, checked for feasibility) and sleep ratios.
double stage_cost(const SystemModel& model, std::size_t slot, const std::vector<long>& levels,
                  const std::vector<double>& sleep);

/// Upper bound on joint (state, action) pairs per stage.
double exact_dp_work(const SystemModel& model);

DpSolution solve_exact_dp(const SystemModel& model, Execution exec = Execution::parallel);
SleepPolicy exact_dp(const SystemModel& model, Execution exec = Execution::parallel);

ReducedDpSolution solve_reduced_dp(const SystemModel& model, Execution exec = Execution::parallel);
SleepPolicy reduced_dp(const SystemModel& model, Execution exec = Execution::parallel);

SleepPolicy greedy(const SystemModel& model);

/// Forward re-simulation of any sleep matrix. Unaffordable ratios are raised
/// to the smallest affordable one and flagged.
SleepPolicy evaluate_policy(const SystemModel& model, const SleepMatrix& sleep,
                            Algorithm label = Algorithm::fixed_policy);

SleepPolicy solve(const SystemModel& model, Algorithm algorithm, Execution exec = Execution::parallel);

namespace reference {

/// Straight serial backward inductions, kept as the baseline the OpenMP
/// kernels are checked against.
ValueTable exact_backward(const SystemModel& model);
ValueTable reduced_backward(const SystemModel& model, int relay);

}  // namespace reference

}  // namespace relaysleep
