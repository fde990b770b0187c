#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "relaysleep/policy.hpp"

namespace relaysleep {

/// Per-slot CSV (RFC 4180, header row, '.' decimal). Columns:
/// slot, phi_1..N, e0_j, e_1..N_j, battery_1..N_j (end of slot), p_blk,
/// p0_blk, lambda0_eff, w0_util, bs_saturated, rs_saturated, clamped,
/// stage_cost.
std::string slots_csv(const SleepPolicy& policy);

struct RunSummary {
  std::string algorithm;
  std::size_t slots = 0;
  int relays = 0;
  double total_grid_energy_j = 0.0;
  double mean_grid_power_w = 0.0;
  double mean_blocking = 0.0;
  double weighted_cost = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  bool any_clamped = false;
};

RunSummary summarize(const SleepPolicy& policy, double wall_time_s, std::uint64_t seed);
std::string summary_json(const RunSummary& summary);

struct TradeoffRow {
  double value = 0.0;
  std::string algorithm;
  double mean_grid_power_w = 0.0;
  double mean_blocking = 0.0;
};

/// Columns: value, algorithm, mean_grid_power_w, mean_blocking.
std::string tradeoff_csv(const std::vector<TradeoffRow>& rows);

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace relaysleep
