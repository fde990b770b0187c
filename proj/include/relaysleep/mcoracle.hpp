#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "relaysleep/policy.hpp"
#include "relaysleep/system_model.hpp"

namespace relaysleep {

enum class QueueStart { empty, stationary };

/// Single station queue. Arrivals are Poisson(`arrival_rate`); the server
/// drains at rate arrival_rate + service_rate, which makes the stationary
/// user count geometric with ratio lambda / (lambda + mu), i.e. mean lambda/mu
/// as Little's law requires.
struct QueueSimConfig {
  double arrival_rate = 1.0;
  double service_rate = 1.0;
  std::uint64_t threshold = 0;
  std::uint64_t horizon = 100'000;  ///< simulated arrivals, warmup included
  std::uint64_t warmup = 10'000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  int batches = 20;
  QueueStart start = QueueStart::empty;
  /// Probability that an arrival finds the station asleep.
  double sleep = 0.0;

  double load() const { return arrival_rate / (arrival_rate + service_rate); }
};

struct TailEstimate {
  double estimate = 0.0;  ///< fraction of arrivals blocked (PASTA)
  double std_error = 0.0; ///< batch means
  double time_average = 0.0;
  double time_average_se = 0.0;
  std::uint64_t arrivals = 0;
};

/// Independent stream for (seed, station, replication).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t station, std::uint64_t replication);

TailEstimate simulate_tail_probability(const QueueSimConfig& cfg);

struct RegionEstimate {
  std::string region;
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;

  /// (empirical - analytic) / std_error; 0 when both the error and the
  /// difference vanish.
  double z() const;
};

struct SlotBlockingEstimate {
  std::vector<RegionEstimate> regions;  ///< BS, each relay, system
};

struct SlotSimOptions {
  int replications = 1000;
  std::uint64_t arrivals_per_replication = 100;
  std::uint64_t seed = 1;
  Execution exec = Execution::parallel;
};

/// Replicated queue simulation of one slot under the given sleep ratios,
/// using the effective arrival rates and admission thresholds of the
/// analytic model. Each replication starts from the stationary law.
SlotBlockingEstimate simulate_slot_blocking(const SystemModel& model, std::size_t slot,
                                            const std::vector<double>& sleep, const SlotSimOptions& options);

}  // namespace relaysleep
