#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "relaysleep/energymodel.hpp"
#include "relaysleep/topology.hpp"

namespace relaysleep {

/// Exogenous inputs of one time slot.
struct SlotInputs {
  double length_s = 3600.0;
  double bs_arrival = 0.0;             ///< users/s in the BS-only region
  std::vector<double> rs_arrival;      ///< users/s per relay disc
  std::vector<double> rs_harvest_w;    ///< harvest power per relay
};

struct BatteryConfig {
  double capacity_j = 0.0;
  double initial_j = 0.0;
  double grid_unit_j = 1.0;  ///< battery and action discretization step
};

struct CostWeights {
  double psi = 0.0;            ///< J per unit of blocking probability
  std::vector<double> omega;   ///< per-slot weights, summing to 1

  static CostWeights uniform(double psi, std::size_t slots);
  void validate(std::size_t slots) const;
};

/// I x N matrix of sleep ratios, slot-major.
using SleepMatrix = std::vector<std::vector<double>>;

struct Scenario {
  CellLayout layout;
  LinkModel links;
  PowerParams power;
  double total_bandwidth_hz = 30e6;
  double service_rate = 1.0;
  double rate_requirement_bps = 200e3;
  std::vector<SlotInputs> slots;
  BatteryConfig battery;
  CostWeights weights;
  /// Cap on joint (state, action) evaluations per stage for the exact DP.
  std::uint64_t exact_dp_budget = 50'000'000;
  /// Sleep ratios used by the fixed-policy algorithm.
  std::optional<SleepMatrix> fixed_policy;

  std::size_t slot_count() const { return slots.size(); }
  int rs_count() const { return layout.rs_count; }
  void validate() const;
};

/// Parameters of the bundled diurnal scenario.
struct DefaultProfile {
  int rs_count = 6;
  int slot_count = 24;
  double peak_total_arrival = 1000.0;  ///< users/s over the whole cell at 20:00
  double trough_fraction = 0.1;        ///< trough (04:00) relative to peak
  double peak_harvest_w = 150.0;       ///< solar peak per relay at noon
  double battery_capacity_j = 2.0 * 3.6e6;
  double grid_unit_j = 12e3;
  double psi = 2e7;
};

/// Diurnal traffic (trough at 04:00, peak at 20:00) split over regions by
/// area, and a solar-shaped harvest max(0, sin(pi (t - 6) / 12)) * peak.
Scenario default_scenario(const DefaultProfile& profile = {});

/// Traffic multiplier of the diurnal profile at hour `t` in [0, 24).
double diurnal_traffic_shape(double hour, double trough_fraction);
double solar_harvest_shape(double hour);

/// Copy of `base` with every arrival rate multiplied by `scale`.
Scenario scale_traffic(const Scenario& base, double scale);

/// Copy of `base` with psi replaced.
Scenario with_psi(const Scenario& base, double psi);

}  // namespace relaysleep
