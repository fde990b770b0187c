#include "relaysleep/mcoracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaysleep/error.hpp"

namespace relaysleep {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t station, std::uint64_t replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(station), static_cast<std::uint32_t>(replication),
                    0x5eedu};
  return std::mt19937_64(seq);
}

namespace {

struct BatchStats {
  double mean = 0.0;
  double se = 0.0;
};

BatchStats batch_stats(const std::vector<double>& values) {
  BatchStats out;
  if (values.empty()) return out;
  const auto b = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= b;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / (b - 1.0) / b);
  return out;
}

}  // namespace

TailEstimate simulate_tail_probability(const QueueSimConfig& cfg) {
  require(std::isfinite(cfg.arrival_rate) && cfg.arrival_rate > 0.0 && cfg.service_rate > 0.0, Errc::unstable_input,
          "need finite lambda > 0 and mu > 0");
  require(cfg.load() < 1.0, Errc::unstable_input, "station load must be below 1");
  require(cfg.horizon > cfg.warmup, Errc::invalid_argument, "horizon must exceed warmup");
  require(cfg.batches >= 1 && static_cast<std::uint64_t>(cfg.batches) <= cfg.horizon - cfg.warmup,
          Errc::invalid_argument, "need 1 <= batches <= recorded arrivals");
  require(cfg.sleep >= 0.0 && cfg.sleep <= 1.0, Errc::invalid_argument, "sleep probability outside [0,1]");

  std::mt19937_64 rng = make_stream(cfg.seed, cfg.stream, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double arrival = cfg.arrival_rate;
  const double departure = cfg.arrival_rate + cfg.service_rate;
  const double rho = cfg.load();

  std::uint64_t users = 0;
  if (cfg.start == QueueStart::stationary) {
    std::geometric_distribution<std::uint64_t> initial(1.0 - rho);
    users = initial(rng);
  }

  const std::uint64_t recorded = cfg.horizon - cfg.warmup;
  const auto batches = static_cast<std::uint64_t>(cfg.batches);
  std::vector<double> blocked_frac(batches, 0.0);
  std::vector<double> tail_time(batches, 0.0);
  std::vector<double> batch_time(batches, 0.0);
  std::vector<std::uint64_t> batch_arrivals(batches, 0);

  std::uint64_t arrivals = 0;
  while (arrivals < cfg.horizon) {
    const double rate = arrival + (users > 0 ? departure : 0.0);
    const double dt = -std::log1p(-unit(rng)) / rate;
    if (arrivals >= cfg.warmup) {
      // Time between the last recorded arrival's batch and the next event.
      const std::uint64_t b = std::min((arrivals - cfg.warmup) * batches / recorded, batches - 1);
      batch_time[b] += dt;
      if (users >= cfg.threshold) tail_time[b] += dt;
    }
    if (users == 0 || unit(rng) * rate < arrival) {
      if (arrivals >= cfg.warmup) {
        const std::uint64_t b = (arrivals - cfg.warmup) * batches / recorded;
        const bool asleep = cfg.sleep > 0.0 && unit(rng) < cfg.sleep;
        if (asleep || users >= cfg.threshold) blocked_frac[b] += 1.0;
        ++batch_arrivals[b];
      }
      ++users;
      ++arrivals;
    } else {
      --users;
    }
  }

  std::vector<double> pasta(batches), timeavg(batches);
  for (std::uint64_t b = 0; b < batches; ++b) {
    pasta[b] = batch_arrivals[b] ? blocked_frac[b] / static_cast<double>(batch_arrivals[b]) : 0.0;
    const double in_tail = batch_time[b] > 0.0 ? tail_time[b] / batch_time[b] : (users >= cfg.threshold ? 1.0 : 0.0);
    timeavg[b] = cfg.sleep + (1.0 - cfg.sleep) * in_tail;
  }
  const BatchStats p = batch_stats(pasta);
  const BatchStats t = batch_stats(timeavg);
  TailEstimate out;
  out.estimate = p.mean;
  out.std_error = p.se;
  out.time_average = t.mean;
  out.time_average_se = t.se;
  out.arrivals = recorded;
  return out;
}

double RegionEstimate::z() const {
  const double diff = empirical - analytic;
  if (std_error > 0.0) return diff / std_error;
  if (std::abs(diff) <= 1e-12) return 0.0;
  return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

SlotBlockingEstimate simulate_slot_blocking(const SystemModel& model, std::size_t slot,
                                            const std::vector<double>& sleep, const SlotSimOptions& options) {
  require(slot < model.slot_count(), Errc::invalid_argument, "slot index out of range");
  require(options.replications >= 2, Errc::invalid_argument, "need at least two replications");
  const auto n = static_cast<std::size_t>(model.rs_count());
  require(sleep.size() == n, Errc::dimension_mismatch, "need one sleep ratio per relay");

  const SlotOutcome analytic = model.evaluate_slot(slot, sleep);
  const SlotConstants& c = model.slot(slot);
  const double mu = c.traffic.service_rate;

  struct Station {
    std::string region;
    double arrival;
    double threshold;
    double sleep;
    double analytic;
    double weight;
  };
  std::vector<Station> stations;
  const double total = c.traffic.total_arrival();
  stations.push_back({"bs", analytic.bs.lambda0_eff, analytic.bs.threshold, 0.0, analytic.bs.blocking,
                      c.traffic.bs_arrival / total});
  for (std::size_t k = 0; k < n; ++k) {
    const double threshold = model.rs_gamma() > 0.0 ? admission_threshold(c.split.rs_limit_hz[k], model.rs_gamma()) : 0.0;
    stations.push_back({"rs" + std::to_string(k + 1), c.traffic.rs_arrival[k], threshold, sleep[k],
                        analytic.rs_blocking[k], c.traffic.rs_arrival[k] / total});
  }

  const auto reps = static_cast<std::size_t>(options.replications);
  const std::size_t cells = stations.size() * reps;
  std::vector<double> estimates(cells, 0.0);

  auto run_cell = [&](std::size_t cell) {
    const Station& st = stations[cell / reps];
    if (st.arrival <= 0.0) return;
    QueueSimConfig cfg;
    cfg.arrival_rate = st.arrival;
    cfg.service_rate = mu;
    cfg.threshold = st.threshold >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max()
                                           : static_cast<std::uint64_t>(st.threshold);
    cfg.horizon = options.arrivals_per_replication;
    cfg.warmup = 0;
    cfg.batches = 1;
    cfg.start = QueueStart::stationary;
    cfg.sleep = st.sleep;
    cfg.seed = options.seed;
    cfg.stream = (cell / reps) * 1'000'003ULL + cell % reps;
    estimates[cell] = simulate_tail_probability(cfg).estimate;
  };

  if (options.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t cell = 0; cell < cells; ++cell) run_cell(cell);
  } else {
    for (std::size_t cell = 0; cell < cells; ++cell) run_cell(cell);
  }

  SlotBlockingEstimate out;
  double sys_emp = 0.0;
  double sys_var = 0.0;
  for (std::size_t st = 0; st < stations.size(); ++st) {
    const Station& station = stations[st];
    if (station.arrival <= 0.0) continue;
    std::vector<double> values(estimates.begin() + static_cast<std::ptrdiff_t>(st * reps),
                               estimates.begin() + static_cast<std::ptrdiff_t>((st + 1) * reps));
    const BatchStats s = batch_stats(values);
    // Sample spread understates the error of rare, slowly mixing tails (and is
    // zero when no replication saw a blocked user). Floor it with a binomial
    // error over the effective number of independent samples: one per
    // relaxation time of the chain, at least one per replication.
    const double gap = std::pow(std::sqrt(station.arrival + mu) - std::sqrt(station.arrival), 2);
    const double per_rep_s = static_cast<double>(options.arrivals_per_replication) / station.arrival;
    const double per_rep = std::clamp(per_rep_s * gap, 1.0, static_cast<double>(options.arrivals_per_replication));
    const double n_eff = static_cast<double>(reps) * per_rep;
    const double se = std::max(s.se, std::sqrt(station.analytic * (1.0 - station.analytic) / n_eff));
    out.regions.push_back({station.region, station.analytic, s.mean, se});
    sys_emp += station.weight * s.mean;
    sys_var += station.weight * station.weight * se * se;
  }
  out.regions.push_back({"system", analytic.system_blocking, sys_emp, std::sqrt(sys_var)});
  return out;
}

}  // namespace relaysleep
