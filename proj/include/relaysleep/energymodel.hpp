#pragma once

#include <vector>

namespace relaysleep {

/// EARTH-style station power model: static part plus a load-proportional part.
struct PowerParams {
  double bs_static_w = 750.0;
  double bs_load_slope = 19.3;
  double bs_tx_power_w = 40.0;
  double rs_static_w = 40.0;
  double rs_load_slope = 9.6;
  double rs_tx_power_w = 40.0;
  double rs_sleep_w = 10.0;

  /// Active relay draw at bandwidth utilization `used / limit`.
  double rs_active_w(double used_hz, double limit_hz) const;
  void validate() const;
};

double bs_slot_energy(double used_hz, double limit_hz, const PowerParams& params, double slot_s);

double rs_slot_energy(double used_hz, double limit_hz, double sleep, const PowerParams& params, double slot_s);

/// Largest sleep ratio a relay can afford, given `drawn_j` taken from its
/// battery plus harvest over the slot. Clamped to [0, 1].
double max_sleep_ratio(double drawn_j, double harvest_w, double active_w, double sleep_w, double slot_s);

/// Per-slot battery ledger. harvested + drawn = consumed + stored + spilled.
struct BatteryStep {
  double next_j = 0.0;
  double harvested_j = 0.0;
  double drawn_j = 0.0;     ///< taken out of the battery
  double consumed_j = 0.0;  ///< relay energy over the slot
  double stored_j = 0.0;    ///< net added to the battery
  double overflow_j = 0.0;  ///< surplus lost to the capacity bound
  double quantization_j = 0.0;  ///< surplus lost snapping down to the grid

  double spilled_j() const { return overflow_j + quantization_j; }
};

/// One-slot battery transition. Throws infeasible-action when the relay
/// would need more energy than stored plus harvested.
BatteryStep battery_step(double level_j, double harvest_w, double sleep, double active_w, double sleep_w,
                         double slot_s, double capacity_j);

/// battery_step followed by snapping the new level down to a multiple of
/// `unit_j` (never rounds up, so no energy is created).
BatteryStep quantized_battery_step(double level_j, double harvest_w, double sleep, double active_w,
                                   double sleep_w, double slot_s, double capacity_j, double unit_j);

/// Floor `level_j` to the battery grid, tolerating round-off just below a
/// grid point.
long grid_index(double level_j, double unit_j);

struct Action {
  double drawn_j = 0.0;  ///< energy taken from the battery (negative: stored)
  double sleep = 0.0;
};

struct ActionSet {
  std::vector<Action> actions;  ///< ascending drawn energy, descending sleep
  /// Set when the battery cannot cover even full sleep; `actions` then holds
  /// the single full-sleep endpoint.
  bool forced_sleep = false;
};

/// Candidate (drawn energy, sleep ratio) pairs for one relay and slot. Drawn
/// energy runs over multiples of `unit_j` between full sleep and full
/// activity; both endpoints are always included.
ActionSet enumerate_actions(double level_j, double harvest_w, double active_w, double sleep_w, double slot_s,
                            double capacity_j, double unit_j);

}  // namespace relaysleep
