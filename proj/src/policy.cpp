#include "relaysleep/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "relaysleep/error.hpp"

namespace relaysleep {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::exact_dp: return "exact-dp";
    case Algorithm::reduced_dp: return "reduced-dp";
    case Algorithm::greedy: return "greedy";
    case Algorithm::fixed_policy: return "fixed-policy";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::exact_dp, Algorithm::reduced_dp, Algorithm::greedy, Algorithm::fixed_policy}) {
    if (name == to_string(a)) return a;
  }
  throw Error(Errc::invalid_argument, "unknown algorithm '" + std::string(name) + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Candidate actions of one relay at one battery level, in ascending sleep
// order, with their grid transitions.
struct LevelActions {
  std::vector<double> sleep;
  std::vector<long> next;
};

LevelActions level_actions(const SystemModel& model, std::size_t slot, int n, long level) {
  const ActionSet set = model.actions(slot, n, level);
  LevelActions out;
  out.sleep.reserve(set.actions.size());
  out.next.reserve(set.actions.size());
  for (auto it = set.actions.rbegin(); it != set.actions.rend(); ++it) {
    out.sleep.push_back(it->sleep);
    out.next.push_back(model.transition(slot, n, level, it->sleep).next_level);
  }
  return out;
}

long pow_checked(long base, int exp) {
  long out = 1;
  for (int k = 0; k < exp; ++k) {
    if (out > std::numeric_limits<long>::max() / std::max(1L, base)) return std::numeric_limits<long>::max();
    out *= base;
  }
  return out;
}

struct JointBest {
  double value = kInf;
  std::vector<double> sleep;
};

// Minimizes stage cost + cost-to-go over the joint action product of one state.
JointBest joint_minimum(const SystemModel& model, std::size_t slot, const std::vector<const LevelActions*>& per_relay,
                        const std::vector<double>* next_value, long levels) {
  const std::size_t n = per_relay.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> sleep(n);
  JointBest best;
  while (true) {
    long next_state = 0;
    long stride = 1;
    for (std::size_t k = 0; k < n; ++k) {
      sleep[k] = per_relay[k]->sleep[idx[k]];
      next_state += per_relay[k]->next[idx[k]] * stride;
      stride *= levels;
    }
    double value = model.stage_cost(slot, sleep);
    if (next_value) value += (*next_value)[static_cast<std::size_t>(next_state)];
    if (value < best.value) {
      best.value = value;
      best.sleep = sleep;
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == per_relay[k]->sleep.size()) idx[k++] = 0;
    if (k == n) break;
  }
  return best;
}

void check_budget(const SystemModel& model) {
  const double work = exact_dp_work(model);
  const auto budget = static_cast<double>(model.scenario().exact_dp_budget);
  if (work > budget) {
    char msg[160];
    std::snprintf(msg, sizeof(msg), "exact DP needs ~%.3g state-action evaluations per stage, budget is %.3g", work,
                  budget);
    throw Error(Errc::state_space_budget_exceeded, msg);
  }
}

SleepMatrix extract_joint(const SystemModel& model, const ValueTable& table) {
  const int n = model.rs_count();
  const long levels = model.level_count();
  std::vector<long> state(static_cast<std::size_t>(n), model.initial_level());
  SleepMatrix sleep(model.slot_count());
  for (std::size_t i = 0; i < model.slot_count(); ++i) {
    long index = 0;
    long stride = 1;
    for (int k = 0; k < n; ++k) {
      index += state[static_cast<std::size_t>(k)] * stride;
      stride *= levels;
    }
    auto& row = sleep[i];
    row.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      row[static_cast<std::size_t>(k)] = table.best_sleep[i][static_cast<std::size_t>(index * n + k)];
      state[static_cast<std::size_t>(k)] = model.transition(i, k, state[static_cast<std::size_t>(k)], row[static_cast<std::size_t>(k)]).next_level;
    }
  }
  return sleep;
}

ValueTable exact_backward_parallel(const SystemModel& model) {
  const int n = model.rs_count();
  const long levels = model.level_count();
  const long states = pow_checked(levels, n);
  const std::size_t slots = model.slot_count();

  ValueTable table;
  table.relays = n;
  table.value.assign(slots, {});
  table.best_sleep.assign(slots, {});

  for (std::size_t s = slots; s-- > 0;) {
    // Per-relay action lists are shared by every joint state at this stage.
    std::vector<LevelActions> actions(static_cast<std::size_t>(n * levels));
#pragma omp parallel for schedule(static)
    for (long cell = 0; cell < n * levels; ++cell) {
      actions[static_cast<std::size_t>(cell)] =
          level_actions(model, s, static_cast<int>(cell / levels), cell % levels);
    }

    const std::vector<double>* next = s + 1 < slots ? &table.value[s + 1] : nullptr;
    std::vector<double>& value = table.value[s];
    std::vector<double>& best = table.best_sleep[s];
    value.assign(static_cast<std::size_t>(states), kInf);
    best.assign(static_cast<std::size_t>(states * n), 0.0);

#pragma omp parallel for schedule(dynamic, 16)
    for (long state = 0; state < states; ++state) {
      std::vector<const LevelActions*> per_relay(static_cast<std::size_t>(n));
      long rest = state;
      for (int k = 0; k < n; ++k) {
        per_relay[static_cast<std::size_t>(k)] = &actions[static_cast<std::size_t>(k * levels + rest % levels)];
        rest /= levels;
      }
      const JointBest jb = joint_minimum(model, s, per_relay, next, levels);
      value[static_cast<std::size_t>(state)] = jb.value;
      std::copy(jb.sleep.begin(), jb.sleep.end(), best.begin() + state * n);
    }
  }
  return table;
}

ValueTable reduced_backward_parallel(const SystemModel& model, int relay) {
  const long levels = model.level_count();
  const std::size_t slots = model.slot_count();
  ValueTable table;
  table.relays = 1;
  table.value.assign(slots, std::vector<double>(static_cast<std::size_t>(levels), kInf));
  table.best_sleep.assign(slots, std::vector<double>(static_cast<std::size_t>(levels), 0.0));

  for (std::size_t s = slots; s-- > 0;) {
    const std::vector<double>* next = s + 1 < slots ? &table.value[s + 1] : nullptr;
    std::vector<double>& value = table.value[s];
    std::vector<double>& best = table.best_sleep[s];
#pragma omp parallel for schedule(dynamic, 8)
    for (long level = 0; level < levels; ++level) {
      const LevelActions a = level_actions(model, s, relay, level);
      double v_best = kInf;
      double phi_best = 0.0;
      for (std::size_t j = 0; j < a.sleep.size(); ++j) {
        double v = model.local_stage_cost(s, relay, a.sleep[j]);
        if (next) v += (*next)[static_cast<std::size_t>(a.next[j])];
        if (v < v_best) {
          v_best = v;
          phi_best = a.sleep[j];
        }
      }
      value[static_cast<std::size_t>(level)] = v_best;
      best[static_cast<std::size_t>(level)] = phi_best;
    }
  }
  return table;
}

}  // namespace

double stage_cost(const SystemModel& model, std::size_t slot, const std::vector<long>& levels,
                  const std::vector<double>& sleep) {
  const auto n = static_cast<std::size_t>(model.rs_count());
  require(levels.size() == n && sleep.size() == n, Errc::dimension_mismatch, "need one entry per relay");
  for (std::size_t k = 0; k < n; ++k) {
    // Throws infeasible-action when the battery cannot fund the ratio.
    (void)model.transition(slot, static_cast<int>(k), levels[k], sleep[k]);
  }
  return model.stage_cost(slot, sleep);
}

double exact_dp_work(const SystemModel& model) {
  const int n = model.rs_count();
  const long top = model.level_count() - 1;
  const double states = std::pow(static_cast<double>(model.level_count()), n);
  double worst = 0.0;
  for (std::size_t s = 0; s < model.slot_count(); ++s) {
    double joint = 1.0;
    for (int k = 0; k < n; ++k) joint *= static_cast<double>(model.actions(s, k, top).actions.size());
    worst = std::max(worst, states * joint);
  }
  return worst;
}

DpSolution solve_exact_dp(const SystemModel& model, Execution exec) {
  check_budget(model);
  DpSolution out;
  out.table = exec == Execution::parallel ? exact_backward_parallel(model) : reference::exact_backward(model);
  out.policy = evaluate_policy(model, extract_joint(model, out.table), Algorithm::exact_dp);
  return out;
}

SleepPolicy exact_dp(const SystemModel& model, Execution exec) { return solve_exact_dp(model, exec).policy; }

ReducedDpSolution solve_reduced_dp(const SystemModel& model, Execution exec) {
  const int n = model.rs_count();
  ReducedDpSolution out;
  out.tables.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out.tables.push_back(exec == Execution::parallel ? reduced_backward_parallel(model, k)
                                                     : reference::reduced_backward(model, k));
  }

  // Each relay's battery only depends on its own decisions, so the forward
  // pass runs relay by relay.
  SleepMatrix sleep(model.slot_count(), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int k = 0; k < n; ++k) {
    long level = model.initial_level();
    for (std::size_t s = 0; s < model.slot_count(); ++s) {
      const double phi = out.tables[static_cast<std::size_t>(k)].best_sleep[s][static_cast<std::size_t>(level)];
      sleep[s][static_cast<std::size_t>(k)] = phi;
      level = model.transition(s, k, level, phi).next_level;
    }
  }
  out.policy = evaluate_policy(model, sleep, Algorithm::reduced_dp);
  return out;
}

SleepPolicy reduced_dp(const SystemModel& model, Execution exec) { return solve_reduced_dp(model, exec).policy; }

SleepPolicy greedy(const SystemModel& model) {
  const int n = model.rs_count();
  SleepMatrix sleep(model.slot_count(), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int k = 0; k < n; ++k) {
    long level = model.initial_level();
    for (std::size_t s = 0; s < model.slot_count(); ++s) {
      const LevelActions a = level_actions(model, s, k, level);
      double v_best = kInf;
      std::size_t j_best = 0;
      for (std::size_t j = 0; j < a.sleep.size(); ++j) {
        const double v = model.local_stage_cost(s, k, a.sleep[j]);
        if (v < v_best) {
          v_best = v;
          j_best = j;
        }
      }
      sleep[s][static_cast<std::size_t>(k)] = a.sleep[j_best];
      level = a.next[j_best];
    }
  }
  return evaluate_policy(model, sleep, Algorithm::greedy);
}

SleepPolicy evaluate_policy(const SystemModel& model, const SleepMatrix& sleep, Algorithm label) {
  const auto n = static_cast<std::size_t>(model.rs_count());
  require(sleep.size() == model.slot_count(), Errc::dimension_mismatch,
          "policy has " + std::to_string(sleep.size()) + " rows, scenario has " +
              std::to_string(model.slot_count()) + " slots");
  const Scenario& sc = model.scenario();

  SleepPolicy out;
  out.algorithm = label;
  out.sleep.resize(sleep.size());
  std::vector<long> level(n, model.initial_level());

  for (std::size_t s = 0; s < sleep.size(); ++s) {
    require(sleep[s].size() == n, Errc::dimension_mismatch, "policy row " + std::to_string(s) + " has wrong width");
    const SlotInputs& in = sc.slots[s];
    SlotMetrics m;
    m.sleep.resize(n);
    m.clamped.assign(n, false);
    m.forced_sleep.assign(n, false);
    m.deficit_j.assign(n, 0.0);
    m.ledger.resize(n);
    m.battery_start_j.resize(n);
    m.battery_end_j.resize(n);

    for (std::size_t k = 0; k < n; ++k) {
      double phi = sleep[s][k];
      require(phi >= 0.0 && phi <= 1.0, Errc::invalid_argument, "sleep ratio outside [0,1]");
      const double stored = model.level_j(level[k]);
      const double active = model.slot(s).rs_active_w[k];
      const double ps = sc.power.rs_sleep_w;
      const double sleep_need = (ps - in.rs_harvest_w[k]) * in.length_s;
      if (sleep_need > stored + 1e-9 * std::max(1.0, std::abs(sleep_need))) {
        m.clamped[k] = phi < 1.0;
        phi = 1.0;
      } else {
        const double floor_phi = max_sleep_ratio(stored, in.rs_harvest_w[k], active, ps, in.length_s);
        // Tolerance absorbs the drawn-energy -> sleep-ratio round trip.
        if (phi < floor_phi - 1e-12) {
          phi = floor_phi;
          m.clamped[k] = true;
        }
      }
      const Transition t = model.transition(s, static_cast<int>(k), level[k], phi);
      m.sleep[k] = phi;
      m.battery_start_j[k] = stored;
      m.battery_end_j[k] = model.level_j(t.next_level);
      m.ledger[k] = t.step;
      m.forced_sleep[k] = t.forced_sleep;
      m.deficit_j[k] = t.deficit_j;
      level[k] = t.next_level;
    }

    const SlotOutcome o = model.evaluate_slot(s, m.sleep);
    m.bs_energy_j = o.bs.energy_j;
    m.rs_energy_j = o.rs_energy_j;
    m.bs_blocking = o.bs.blocking;
    m.rs_blocking = o.rs_blocking;
    m.system_blocking = o.system_blocking;
    m.lambda0_eff = o.bs.lambda0_eff;
    m.gamma0 = o.bs.gamma0;
    m.bs_used_hz = o.bs.used.hz;
    m.bs_limit_hz = model.slot(s).split.bs_limit_hz;
    m.bs_saturated = o.bs.used.saturated;
    m.rs_saturated = std::any_of(model.slot(s).rs_used.begin(), model.slot(s).rs_used.end(),
                                 [](const Utilization& u) { return u.saturated; });
    m.stage_cost = o.stage_cost;

    out.total_cost += m.stage_cost;
    out.total_grid_energy_j += m.bs_energy_j;
    out.total_length_s += in.length_s;
    out.mean_blocking += m.system_blocking;
    out.any_clamped = out.any_clamped || std::find(m.clamped.begin(), m.clamped.end(), true) != m.clamped.end();
    out.sleep[s] = m.sleep;
    out.slots.push_back(std::move(m));
  }
  out.mean_blocking /= static_cast<double>(sleep.size());
  return out;
}

SleepPolicy solve(const SystemModel& model, Algorithm algorithm, Execution exec) {
  switch (algorithm) {
    case Algorithm::exact_dp: return exact_dp(model, exec);
    case Algorithm::reduced_dp: return reduced_dp(model, exec);
    case Algorithm::greedy: return greedy(model);
    case Algorithm::fixed_policy: {
      const auto& fixed = model.scenario().fixed_policy;
      require(fixed.has_value(), Errc::schema_invalid, "fixed-policy needs a 'policy' matrix in the scenario");
      return evaluate_policy(model, *fixed, Algorithm::fixed_policy);
    }
  }
  throw Error(Errc::invalid_argument, "unknown algorithm");
}

}  // namespace relaysleep
