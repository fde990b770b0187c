#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "relaysleep/energymodel.hpp"
#include "relaysleep/loadmodel.hpp"
#include "relaysleep/scenario.hpp"

namespace relaysleep {

/// Quantities of a slot that do not depend on the sleep decision.
struct SlotConstants {
  SlotTraffic traffic;
  ResourceSplit split;
  std::vector<Utilization> rs_used;
  std::vector<double> rs_active_w;
  std::vector<double> rs_load;
  std::vector<double> rs_resource_blocking;
};

/// BS-side quantities for a given set of sleep ratios.
struct BsOutcome {
  double lambda0_eff = 0.0;
  double gamma0 = 0.0;
  double load = 0.0;
  double threshold = 0.0;
  Utilization used;
  double energy_j = 0.0;
  double blocking = 0.0;
};

struct SlotOutcome {
  BsOutcome bs;
  std::vector<double> rs_energy_j;
  std::vector<double> rs_blocking;
  double system_blocking = 0.0;
  double stage_cost = 0.0;
};

struct Transition {
  long next_level = 0;
  BatteryStep step;
  bool forced_sleep = false;
  double deficit_j = 0.0;  ///< sleep energy the relay could not cover
};

/// A validated scenario with its slot-invariant quantities precomputed.
/// Immutable after construction and safe to share across threads.
class SystemModel {
 public:
  explicit SystemModel(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  std::size_t slot_count() const { return scenario_.slots.size(); }
  int rs_count() const { return scenario_.layout.rs_count; }
  const DemandIntegrals& integrals() const { return integrals_; }
  double relay_gain() const { return gain_; }
  double rs_gamma() const { return rs_gamma_; }
  const SlotConstants& slot(std::size_t i) const { return slots_[i]; }

  SlotOutcome evaluate_slot(std::size_t i, std::span<const double> sleep) const;

  /// Joint stage cost E0 + psi * omega_i * P_blk.
  double stage_cost(std::size_t i, std::span<const double> sleep) const;

  /// Stage cost of the subsystem made of the BS-only region and relay `n`
  /// alone (the per-relay cost of the decomposed DP).
  double local_stage_cost(std::size_t i, int n, double sleep) const;

  long level_count() const { return level_count_; }
  double level_j(long k) const { return static_cast<double>(k) * scenario_.battery.grid_unit_j; }
  long initial_level() const;

  ActionSet actions(std::size_t i, int n, long level) const;

  /// Battery transition on the grid. Forced sleep (battery cannot cover the
  /// sleep draw) empties the battery and records the deficit.
  Transition transition(std::size_t i, int n, long level, double sleep) const;

 private:
  BsOutcome bs_outcome(const SlotTraffic& traffic, double bs_limit_hz, double slot_s,
                       std::span<const double> sleep, std::span<const double> gains) const;

  Scenario scenario_;
  DemandIntegrals integrals_;
  double gain_ = 1.0;
  double rs_gamma_ = 0.0;
  std::vector<double> gains_;
  std::vector<SlotConstants> slots_;
  long level_count_ = 1;
};

}  // namespace relaysleep
