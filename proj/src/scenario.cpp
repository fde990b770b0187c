#include "relaysleep/scenario.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "relaysleep/error.hpp"

namespace relaysleep {

CostWeights CostWeights::uniform(double psi, std::size_t slots) {
  CostWeights w;
  w.psi = psi;
  w.omega.assign(slots, slots ? 1.0 / static_cast<double>(slots) : 0.0);
  return w;
}

void CostWeights::validate(std::size_t slots) const {
  require(psi >= 0.0, Errc::invalid_argument, "psi must be non-negative");
  require(omega.size() == slots, Errc::dimension_mismatch,
          "omega has " + std::to_string(omega.size()) + " entries, expected " + std::to_string(slots));
  for (double w : omega) require(w >= 0.0, Errc::invalid_argument, "omega entries must be non-negative");
  const double sum = std::accumulate(omega.begin(), omega.end(), 0.0);
  require(std::abs(sum - 1.0) <= 1e-12, Errc::invalid_argument, "omega must sum to 1");
}

void Scenario::validate() const {
  // Re-run the geometry checks on whatever was loaded.
  const CellLayout check = build_layout(layout.bs_radius_m, layout.rs_half_width_m, layout.rs_count);
  require(std::abs(check.rs_distance_m - layout.rs_distance_m) <= 1e-9 * layout.bs_radius_m,
          Errc::invalid_geometry, "relay distance must equal R - 2r");
  power.validate();
  require(total_bandwidth_hz > 0.0, Errc::invalid_argument, "total bandwidth must be positive");
  require(service_rate > 0.0, Errc::invalid_argument, "service rate must be positive");
  require(rate_requirement_bps >= 0.0, Errc::invalid_argument, "rate requirement must be non-negative");
  require(!slots.empty(), Errc::invalid_argument, "scenario has no slots");

  const auto n = static_cast<std::size_t>(layout.rs_count);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const SlotInputs& s = slots[i];
    const std::string where = "slot " + std::to_string(i);
    require(s.length_s > 0.0, Errc::invalid_argument, where + ": slot length must be positive");
    require(s.bs_arrival >= 0.0, Errc::invalid_argument, where + ": negative BS arrival rate");
    require(s.rs_arrival.size() == n && s.rs_harvest_w.size() == n, Errc::dimension_mismatch,
            where + ": relay profiles must have one entry per relay");
    double total = s.bs_arrival;
    for (std::size_t k = 0; k < n; ++k) {
      require(s.rs_arrival[k] >= 0.0 && s.rs_harvest_w[k] >= 0.0, Errc::invalid_argument,
              where + ": negative relay arrival or harvest");
      total += s.rs_arrival[k];
    }
    require(total > 0.0, Errc::zero_total_traffic, where + ": no arriving traffic");
  }

  require(battery.capacity_j >= 0.0, Errc::invalid_argument, "battery capacity must be non-negative");
  require(battery.initial_j >= 0.0 && battery.initial_j <= battery.capacity_j, Errc::invalid_argument,
          "initial battery must lie in [0, capacity]");
  require(battery.grid_unit_j > 0.0, Errc::invalid_argument, "battery grid unit must be positive");
  weights.validate(slots.size());

  if (fixed_policy) {
    require(fixed_policy->size() == slots.size(), Errc::dimension_mismatch, "fixed policy needs one row per slot");
    for (const auto& row : *fixed_policy) {
      require(row.size() == n, Errc::dimension_mismatch, "fixed policy needs one column per relay");
      for (double phi : row) require(phi >= 0.0 && phi <= 1.0, Errc::invalid_argument, "sleep ratio outside [0,1]");
    }
  }
}

double diurnal_traffic_shape(double hour, double trough_fraction) {
  constexpr double trough_hour = 4.0;
  constexpr double rise = 16.0;  // 04:00 -> 20:00
  constexpr double fall = 8.0;   // 20:00 -> 04:00
  const double tau = std::fmod(std::fmod(hour - trough_hour, 24.0) + 24.0, 24.0);
  const double up = tau <= rise ? 0.5 * (1.0 - std::cos(std::numbers::pi * tau / rise))
                                : 0.5 * (1.0 + std::cos(std::numbers::pi * (tau - rise) / fall));
  return trough_fraction + (1.0 - trough_fraction) * up;
}

double solar_harvest_shape(double hour) {
  return std::max(0.0, std::sin(std::numbers::pi * (hour - 6.0) / 12.0));
}

Scenario default_scenario(const DefaultProfile& profile) {
  Scenario s;
  s.layout = build_layout(800.0, 100.0, profile.rs_count);

  s.links.direct = {91.3, 3.4, 0.0, 30e6};
  s.links.access = {76.8, 7.4, 0.0, 30e6};
  s.links.backhaul = {88.3, 3.1, 0.0, 30e6};
  s.links.bs_tx_power_w = 40.0;
  s.links.rs_tx_power_w = 40.0;
  s.links.noise_density_dbm_hz = -174.0;

  s.power = PowerParams{};
  s.total_bandwidth_hz = 30e6;
  s.service_rate = 1.0;
  s.rate_requirement_bps = 200e3;

  const double cell_area = std::numbers::pi * s.layout.bs_radius_m * s.layout.bs_radius_m;
  const double bs_share = s.layout.bs_only_area_m2() / cell_area;
  const double rs_share = s.layout.rs_area_m2() / cell_area;
  const auto n = static_cast<std::size_t>(profile.rs_count);

  for (int i = 0; i < profile.slot_count; ++i) {
    const double hour = 24.0 * i / profile.slot_count;
    const double total = profile.peak_total_arrival * diurnal_traffic_shape(hour, profile.trough_fraction);
    SlotInputs slot;
    slot.length_s = 24.0 * 3600.0 / profile.slot_count;
    slot.bs_arrival = total * bs_share;
    slot.rs_arrival.assign(n, total * rs_share);
    slot.rs_harvest_w.assign(n, profile.peak_harvest_w * solar_harvest_shape(hour));
    s.slots.push_back(std::move(slot));
  }

  s.battery.capacity_j = profile.battery_capacity_j;
  s.battery.grid_unit_j = profile.grid_unit_j;
  s.battery.initial_j =
      static_cast<double>(grid_index(0.5 * profile.battery_capacity_j, profile.grid_unit_j)) * profile.grid_unit_j;
  s.weights = CostWeights::uniform(profile.psi, s.slots.size());
  return s;
}

Scenario scale_traffic(const Scenario& base, double scale) {
  require(scale > 0.0, Errc::invalid_argument, "traffic scale must be positive");
  Scenario out = base;
  for (SlotInputs& slot : out.slots) {
    slot.bs_arrival *= scale;
    for (double& lambda : slot.rs_arrival) lambda *= scale;
  }
  return out;
}

Scenario with_psi(const Scenario& base, double psi) {
  require(psi >= 0.0, Errc::invalid_argument, "psi must be non-negative");
  Scenario out = base;
  out.weights.psi = psi;
  return out;
}

}  // namespace relaysleep
