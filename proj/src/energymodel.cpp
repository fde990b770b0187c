#include "relaysleep/energymodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relaysleep/error.hpp"

namespace relaysleep {

namespace {

// Absolute slack for energy comparisons that went through a sleep-ratio round trip.
double energy_slack(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

}  // namespace

double PowerParams::rs_active_w(double used_hz, double limit_hz) const {
  const double load = limit_hz > 0.0 ? used_hz / limit_hz : 0.0;
  return rs_static_w + rs_load_slope * rs_tx_power_w * load;
}

void PowerParams::validate() const {
  require(bs_static_w >= 0 && bs_load_slope >= 0 && bs_tx_power_w >= 0 && rs_static_w >= 0 &&
              rs_load_slope >= 0 && rs_tx_power_w >= 0 && rs_sleep_w >= 0,
          Errc::invalid_argument, "power parameters must be non-negative");
  require(rs_sleep_w > 0.0, Errc::degenerate_powers, "relay sleep power must be positive");
  require(rs_static_w > rs_sleep_w, Errc::degenerate_powers, "active relay power must exceed sleep power");
}

double bs_slot_energy(double used_hz, double limit_hz, const PowerParams& params, double slot_s) {
  require(limit_hz > 0.0, Errc::invalid_argument, "zero-W0th: BS bandwidth limit must be positive");
  return (params.bs_static_w + params.bs_load_slope * params.bs_tx_power_w * used_hz / limit_hz) * slot_s;
}

double rs_slot_energy(double used_hz, double limit_hz, double sleep, const PowerParams& params, double slot_s) {
  require(limit_hz > 0.0, Errc::invalid_argument, "zero-Wnth: relay bandwidth limit must be positive");
  require(sleep >= 0.0 && sleep <= 1.0, Errc::invalid_argument, "sleep ratio must lie in [0,1]");
  return (params.rs_active_w(used_hz, limit_hz) * (1.0 - sleep) + params.rs_sleep_w * sleep) * slot_s;
}

double max_sleep_ratio(double drawn_j, double harvest_w, double active_w, double sleep_w, double slot_s) {
  require(active_w > sleep_w, Errc::degenerate_powers, "active power must exceed sleep power");
  const double ratio = (active_w - (drawn_j / slot_s + harvest_w)) / (active_w - sleep_w);
  return std::clamp(ratio, 0.0, 1.0);
}

BatteryStep battery_step(double level_j, double harvest_w, double sleep, double active_w, double sleep_w,
                         double slot_s, double capacity_j) {
  require(sleep >= 0.0 && sleep <= 1.0, Errc::invalid_argument, "sleep ratio must lie in [0,1]");
  require(level_j >= 0.0 && level_j <= capacity_j + energy_slack(capacity_j), Errc::invalid_argument,
          "battery level outside [0, capacity]");

  BatteryStep step;
  step.harvested_j = harvest_w * slot_s;
  step.consumed_j = ((1.0 - sleep) * active_w + sleep * sleep_w) * slot_s;
  double next = level_j + step.harvested_j - step.consumed_j;
  if (next < 0.0) {
    if (next < -energy_slack(step.consumed_j)) {
      throw Error(Errc::infeasible_action, "relay needs " + std::to_string(-next) + " J more than it has");
    }
    next = 0.0;
  }
  if (next > capacity_j) {
    step.overflow_j = next - capacity_j;
    next = capacity_j;
  }
  step.next_j = next;
  if (next >= level_j) {
    step.stored_j = next - level_j;
  } else {
    step.drawn_j = level_j - next;
  }
  return step;
}

long grid_index(double level_j, double unit_j) {
  require(unit_j > 0.0, Errc::invalid_argument, "battery grid unit must be positive");
  return static_cast<long>(std::floor(level_j / unit_j + 1e-9));
}

BatteryStep quantized_battery_step(double level_j, double harvest_w, double sleep, double active_w,
                                   double sleep_w, double slot_s, double capacity_j, double unit_j) {
  BatteryStep step = battery_step(level_j, harvest_w, sleep, active_w, sleep_w, slot_s, capacity_j);
  const double snapped = static_cast<double>(std::max(0L, grid_index(step.next_j, unit_j))) * unit_j;
  if (snapped < step.next_j) {
    step.quantization_j = step.next_j - snapped;
    step.next_j = snapped;
    step.stored_j = std::max(0.0, snapped - level_j);
    step.drawn_j = std::max(0.0, level_j - snapped);
  }
  return step;
}

ActionSet enumerate_actions(double level_j, double harvest_w, double active_w, double sleep_w, double slot_s,
                            double capacity_j, double unit_j) {
  require(unit_j > 0.0, Errc::invalid_argument, "action grid unit must be positive");
  require(active_w > sleep_w, Errc::degenerate_powers, "active power must exceed sleep power");
  (void)capacity_j;

  const double lower = -(harvest_w - sleep_w) * slot_s;                   // full sleep
  const double upper = std::min(level_j, (active_w - harvest_w) * slot_s);  // full activity or empty battery

  ActionSet out;
  if (lower > level_j + energy_slack(lower)) {
    out.forced_sleep = true;
    out.actions.push_back({lower, 1.0});
    return out;
  }
  const double full_activity = (active_w - harvest_w) * slot_s;
  auto push = [&](double drawn) {
    double sleep = max_sleep_ratio(drawn, harvest_w, active_w, sleep_w, slot_s);
    // Endpoints are exact, not round-tripped through the ratio.
    if (drawn == lower) sleep = 1.0;
    if (drawn >= full_activity - energy_slack(full_activity)) sleep = 0.0;
    if (!out.actions.empty()) {
      const Action& last = out.actions.back();
      if (std::abs(last.drawn_j - drawn) <= energy_slack(drawn) || last.sleep == sleep) return;
    }
    out.actions.push_back({drawn, sleep});
  };

  push(lower);
  const long first = static_cast<long>(std::ceil(lower / unit_j - 1e-9));
  const long last = static_cast<long>(std::floor(upper / unit_j + 1e-9));
  for (long k = first; k <= last; ++k) {
    const double drawn = static_cast<double>(k) * unit_j;
    if (drawn > lower) push(drawn);
  }
  if (upper >= lower) push(upper);
  return out;
}

}  // namespace relaysleep
