#include <functional>
#include <limits>

#include "relaysleep/policy.hpp"

namespace relaysleep::reference {

ValueTable exact_backward(const SystemModel& model) {
  const int n = model.rs_count();
  const long levels = model.level_count();
  long states = 1;
  for (int k = 0; k < n; ++k) states *= levels;
  const std::size_t slots = model.slot_count();

  ValueTable table;
  table.relays = n;
  table.value.assign(slots, std::vector<double>(static_cast<std::size_t>(states)));
  table.best_sleep.assign(slots, std::vector<double>(static_cast<std::size_t>(states * n)));

  for (std::size_t s = slots; s-- > 0;) {
    for (long state = 0; state < states; ++state) {
      std::vector<long> level(static_cast<std::size_t>(n));
      for (int k = 0, rest = static_cast<int>(state); k < n; ++k, rest /= static_cast<int>(levels)) {
        level[static_cast<std::size_t>(k)] = rest % levels;
      }

      std::vector<double> sleep(static_cast<std::size_t>(n));
      std::vector<long> next(static_cast<std::size_t>(n));
      double best = std::numeric_limits<double>::infinity();
      std::vector<double> best_sleep(static_cast<std::size_t>(n));

      // Highest relay in the outermost loop, relay 0 innermost; each relay
      // scans its actions from the smallest sleep ratio up.
      std::function<void(int)> visit = [&](int k) {
        if (k < 0) {
          long next_state = 0;
          for (int j = n - 1; j >= 0; --j) next_state = next_state * levels + next[static_cast<std::size_t>(j)];
          double v = model.stage_cost(s, sleep);
          if (s + 1 < slots) v += table.value[s + 1][static_cast<std::size_t>(next_state)];
          if (v < best) {
            best = v;
            best_sleep = sleep;
          }
          return;
        }
        const ActionSet set = model.actions(s, k, level[static_cast<std::size_t>(k)]);
        for (auto it = set.actions.rbegin(); it != set.actions.rend(); ++it) {
          sleep[static_cast<std::size_t>(k)] = it->sleep;
          next[static_cast<std::size_t>(k)] = model.transition(s, k, level[static_cast<std::size_t>(k)], it->sleep).next_level;
          visit(k - 1);
        }
      };
      visit(n - 1);

      table.value[s][static_cast<std::size_t>(state)] = best;
      for (int k = 0; k < n; ++k) {
        table.best_sleep[s][static_cast<std::size_t>(state * n + k)] = best_sleep[static_cast<std::size_t>(k)];
      }
    }
  }
  return table;
}

ValueTable reduced_backward(const SystemModel& model, int relay) {
  const long levels = model.level_count();
  const std::size_t slots = model.slot_count();
  ValueTable table;
  table.relays = 1;
  table.value.assign(slots, std::vector<double>(static_cast<std::size_t>(levels)));
  table.best_sleep.assign(slots, std::vector<double>(static_cast<std::size_t>(levels)));

  for (std::size_t s = slots; s-- > 0;) {
    for (long level = 0; level < levels; ++level) {
      const ActionSet set = model.actions(s, relay, level);
      double best = std::numeric_limits<double>::infinity();
      double best_phi = 0.0;
      for (auto it = set.actions.rbegin(); it != set.actions.rend(); ++it) {
        double v = model.local_stage_cost(s, relay, it->sleep);
        if (s + 1 < slots) {
          v += table.value[s + 1][static_cast<std::size_t>(model.transition(s, relay, level, it->sleep).next_level)];
        }
        if (v < best) {
          best = v;
          best_phi = it->sleep;
        }
      }
      table.value[s][static_cast<std::size_t>(level)] = best;
      table.best_sleep[s][static_cast<std::size_t>(level)] = best_phi;
    }
  }
  return table;
}

}  // namespace relaysleep::reference
