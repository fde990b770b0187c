#include "relaysleep/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relaysleep/error.hpp"

namespace relaysleep {

SystemModel::SystemModel(Scenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
  for (std::size_t i = 0; i < scenario_.slots.size(); ++i) {
    require(scenario_.slots[i].bs_arrival > 0.0, Errc::invalid_argument,
            "slot " + std::to_string(i) + ": the BS-only region needs traffic to receive bandwidth");
  }

  integrals_ = demand_integrals(scenario_.layout, scenario_.links);
  gain_ = relaysleep::relay_gain(scenario_.layout, integrals_);
  rs_gamma_ = gamma_n(scenario_.layout, integrals_, scenario_.rate_requirement_bps);
  require(rs_gamma_ > 0.0 || scenario_.rate_requirement_bps == 0.0, Errc::zero_rate_link,
          "relay per-user demand is not positive");
  const auto n = static_cast<std::size_t>(rs_count());
  gains_.assign(n, gain_);

  const BatteryConfig& b = scenario_.battery;
  level_count_ = grid_index(b.capacity_j, b.grid_unit_j) + 1;

  slots_.reserve(scenario_.slots.size());
  for (const SlotInputs& in : scenario_.slots) {
    SlotConstants c;
    c.traffic.bs_arrival = in.bs_arrival;
    c.traffic.rs_arrival = in.rs_arrival;
    c.traffic.service_rate = scenario_.service_rate;
    c.traffic.rate_requirement_bps = scenario_.rate_requirement_bps;
    c.split = resource_split(c.traffic, scenario_.total_bandwidth_hz);
    for (std::size_t k = 0; k < n; ++k) {
      const double rho = station_load(in.rs_arrival[k], scenario_.service_rate);
      const double limit = c.split.rs_limit_hz[k];
      const Utilization used = expected_utilization(rho, rs_gamma_, limit);
      c.rs_load.push_back(rho);
      c.rs_used.push_back(used);
      c.rs_active_w.push_back(scenario_.power.rs_active_w(used.hz, limit));
      c.rs_resource_blocking.push_back(rs_gamma_ > 0.0 ? blocking_geometric(rho, limit, rs_gamma_) : 0.0);
    }
    slots_.push_back(std::move(c));
  }
}

long SystemModel::initial_level() const {
  return std::min(grid_index(scenario_.battery.initial_j, scenario_.battery.grid_unit_j), level_count_ - 1);
}

BsOutcome SystemModel::bs_outcome(const SlotTraffic& traffic, double bs_limit_hz, double slot_s,
                                  std::span<const double> sleep, std::span<const double> gains) const {
  BsOutcome out;
  out.lambda0_eff = effective_bs_arrival(traffic, sleep, gains);
  out.gamma0 = gamma0(scenario_.layout, integrals_, traffic, sleep, gains);
  out.load = station_load(out.lambda0_eff, traffic.service_rate);
  out.used = expected_utilization(out.load, out.gamma0, bs_limit_hz);
  out.energy_j = bs_slot_energy(out.used.hz, bs_limit_hz, scenario_.power, slot_s);
  if (out.gamma0 > 0.0) {
    out.threshold = admission_threshold(bs_limit_hz, out.gamma0);
    out.blocking = blocking_geometric(out.load, bs_limit_hz, out.gamma0);
  }
  return out;
}

SlotOutcome SystemModel::evaluate_slot(std::size_t i, std::span<const double> sleep) const {
  const SlotConstants& c = slots_.at(i);
  const auto n = static_cast<std::size_t>(rs_count());
  require(sleep.size() == n, Errc::dimension_mismatch, "need one sleep ratio per relay");
  const double slot_s = scenario_.slots[i].length_s;
  const PowerParams& p = scenario_.power;

  SlotOutcome out;
  out.bs = bs_outcome(c.traffic, c.split.bs_limit_hz, slot_s, sleep, gains_);
  out.rs_energy_j.resize(n);
  out.rs_blocking.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double phi = sleep[k];
    require(phi >= 0.0 && phi <= 1.0, Errc::invalid_argument, "sleep ratio outside [0,1]");
    out.rs_energy_j[k] = c.split.rs_limit_hz[k] > 0.0
                             ? rs_slot_energy(c.rs_used[k].hz, c.split.rs_limit_hz[k], phi, p, slot_s)
                             : (p.rs_static_w * (1.0 - phi) + p.rs_sleep_w * phi) * slot_s;
    out.rs_blocking[k] = phi + (1.0 - phi) * c.rs_resource_blocking[k];
  }
  out.system_blocking = system_blocking(c.traffic, out.bs.blocking, out.rs_blocking);
  out.stage_cost = out.bs.energy_j + scenario_.weights.psi * scenario_.weights.omega[i] * out.system_blocking;
  return out;
}

double SystemModel::stage_cost(std::size_t i, std::span<const double> sleep) const {
  return evaluate_slot(i, sleep).stage_cost;
}

double SystemModel::local_stage_cost(std::size_t i, int n, double sleep) const {
  const SlotConstants& c = slots_.at(i);
  const auto k = static_cast<std::size_t>(n);
  SlotTraffic local;
  local.bs_arrival = c.traffic.bs_arrival;
  local.rs_arrival = {c.traffic.rs_arrival[k]};
  local.service_rate = c.traffic.service_rate;
  local.rate_requirement_bps = c.traffic.rate_requirement_bps;

  const double phi[1] = {sleep};
  const double gain[1] = {gain_};
  const BsOutcome bs = bs_outcome(local, c.split.bs_limit_hz, scenario_.slots[i].length_s, phi, gain);
  const double rs_block[1] = {sleep + (1.0 - sleep) * c.rs_resource_blocking[k]};
  const double blocking = system_blocking(local, bs.blocking, rs_block);
  return bs.energy_j + scenario_.weights.psi * scenario_.weights.omega[i] * blocking;
}

ActionSet SystemModel::actions(std::size_t i, int n, long level) const {
  const auto k = static_cast<std::size_t>(n);
  const SlotInputs& in = scenario_.slots[i];
  return enumerate_actions(level_j(level), in.rs_harvest_w[k], slots_[i].rs_active_w[k], scenario_.power.rs_sleep_w,
                           in.length_s, scenario_.battery.capacity_j, scenario_.battery.grid_unit_j);
}

Transition SystemModel::transition(std::size_t i, int n, long level, double sleep) const {
  const auto k = static_cast<std::size_t>(n);
  const SlotInputs& in = scenario_.slots[i];
  const double active = slots_[i].rs_active_w[k];
  const double ps = scenario_.power.rs_sleep_w;
  const double stored = level_j(level);

  Transition t;
  const double sleep_need = (ps - in.rs_harvest_w[k]) * in.length_s;
  if (sleep >= 1.0 && sleep_need > stored + 1e-9 * std::max(1.0, std::abs(sleep_need))) {
    // Not even sleep is affordable: the battery is drained and the rest is missing.
    t.forced_sleep = true;
    t.next_level = 0;
    t.step.harvested_j = in.rs_harvest_w[k] * in.length_s;
    t.step.drawn_j = stored;
    t.step.consumed_j = t.step.harvested_j + stored;
    t.step.next_j = 0.0;
    t.deficit_j = sleep_need - stored;
    return t;
  }
  t.step = quantized_battery_step(stored, in.rs_harvest_w[k], sleep, active, ps, in.length_s,
                                  scenario_.battery.capacity_j, scenario_.battery.grid_unit_j);
  t.next_level = std::min(grid_index(t.step.next_j, scenario_.battery.grid_unit_j), level_count_ - 1);
  return t;
}

}  // namespace relaysleep
