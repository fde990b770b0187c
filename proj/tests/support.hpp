#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>

#include "relaysleep/scenario.hpp"
#include "relaysleep/system_model.hpp"

namespace testsupport {

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1e-300, std::abs(a), std::abs(b)});
}

inline relaysleep::LinkModel default_links(double noise_dbm_hz) {
  relaysleep::LinkModel links;
  links.direct = {91.3, 3.4, 0.0, 30e6};
  links.access = {76.8, 7.4, 0.0, 30e6};
  links.backhaul = {88.3, 3.1, 0.0, 30e6};
  links.noise_density_dbm_hz = noise_dbm_hz;
  return links;
}

struct SmallShape {
  int relays = 2;
  int slots = 3;
  double slot_s = 60.0;
  double unit_j = 6000.0;
  int levels = 5;  // capacity = (levels - 1) * unit
};

/// Short-slot scenario with few battery levels and few actions per relay, so
/// brute force over every action sequence stays cheap.
inline relaysleep::Scenario small_scenario(std::mt19937_64& rng, const SmallShape& shape = {}) {
  using namespace relaysleep;
  std::uniform_real_distribution<double> bs(50.0, 500.0), rs(0.5, 20.0), harvest(0.0, 80.0), u01(0.0, 1.0);
  Scenario s = default_scenario(DefaultProfile{shape.relays, shape.slots});
  for (auto& slot : s.slots) {
    slot.length_s = shape.slot_s;
    slot.bs_arrival = bs(rng);
    for (auto& v : slot.rs_arrival) v = rs(rng);
    for (auto& v : slot.rs_harvest_w) v = harvest(rng);
  }
  s.battery.grid_unit_j = shape.unit_j;
  s.battery.capacity_j = shape.unit_j * (shape.levels - 1);
  std::uniform_int_distribution<int> level(0, shape.levels - 1);
  s.battery.initial_j = shape.unit_j * level(rng);
  s.weights = CostWeights::uniform(std::pow(10.0, 4.0 + 3.0 * u01(rng)), s.slots.size());
  return s;
}

// Minimum total cost over every joint action sequence, by plain recursion.
inline double brute_force(const relaysleep::SystemModel& m, std::size_t slot, std::vector<long> levels,
                          long* joint_actions = nullptr) {
  if (slot == m.slot_count()) return 0.0;
  const int n = m.rs_count();
  std::vector<std::vector<double>> options(static_cast<std::size_t>(n));
  long product = 1;
  for (int k = 0; k < n; ++k) {
    for (const relaysleep::Action& a : m.actions(slot, k, levels[static_cast<std::size_t>(k)]).actions) {
      options[static_cast<std::size_t>(k)].push_back(a.sleep);
    }
    product *= static_cast<long>(options[static_cast<std::size_t>(k)].size());
  }
  if (joint_actions) *joint_actions = std::max(*joint_actions, product);

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> phi(static_cast<std::size_t>(n));
  std::function<void(int)> pick = [&](int k) {
    if (k == n) {
      std::vector<long> next(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        next[static_cast<std::size_t>(j)] =
            m.transition(slot, j, levels[static_cast<std::size_t>(j)], phi[static_cast<std::size_t>(j)]).next_level;
      }
      best = std::min(best, m.stage_cost(slot, phi) + brute_force(m, slot + 1, next, joint_actions));
      return;
    }
    for (double v : options[static_cast<std::size_t>(k)]) {
      phi[static_cast<std::size_t>(k)] = v;
      pick(k + 1);
    }
  };
  pick(0);
  return best;
}

}  // namespace testsupport
