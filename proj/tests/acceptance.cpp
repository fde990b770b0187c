// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any of them fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "relaysleep/commands.hpp"
#include "relaysleep/energymodel.hpp"
#include "relaysleep/loadmodel.hpp"
#include "relaysleep/mcoracle.hpp"
#include "relaysleep/policy.hpp"
#include "support.hpp"

using namespace relaysleep;
using testsupport::close_rel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0 && secs > time_limit_s) {
    o.pass = false;
    o.detail += "; over the time limit";
  }
  char line[64];
  std::snprintf(line, sizeof line, " [%.1f s", secs);
  std::string limit;
  if (time_limit_s > 0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " / %.0f s", time_limit_s);
    limit = buf;
  }
  std::printf("%s %s: %s%s%s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), line, limit.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Non-decreasing up to round-off.
bool non_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] < v[k - 1] - 1e-9 * std::abs(v[k - 1])) return false;
  }
  return true;
}

bool non_increasing(std::vector<double> v) {
  for (double& x : v) x = -x;
  return non_decreasing(v);
}

Outcome oracle_blocking() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> load(0.1, 0.9), mu(0.2, 50.0), gamma(1e3, 1e6);
  const int instances = 20;
  const double arrivals = 1e5;
  int agree = 0;
  double worst = 0.0;
  std::string misses;
  for (int t = 0; t < instances; ++t) {
    const double rho = load(rng), m = mu(rng);
    const double lambda = rho * m / (1.0 - rho);
    // Stay where 1e5 arrivals mix well: rho^K >= 1e-3 and at least 1000
    // expected entries into the tail, arrivals * (1 - rho) * rho^(K-1).
    // Deeper tails give skewed estimates whose batch-means z is far from normal.
    int kmax = 1;
    while (std::pow(rho, kmax + 1) >= 1e-3 && arrivals * (1.0 - rho) * std::pow(rho, kmax) >= 1000.0) ++kmax;
    const int k = std::uniform_int_distribution<int>(1, kmax)(rng);
    const double g = gamma(rng);
    const double analytic = blocking_geometric(station_load(lambda, m), k * g, g);

    QueueSimConfig cfg;
    cfg.arrival_rate = lambda;
    cfg.service_rate = m;
    cfg.threshold = static_cast<std::uint64_t>(k);
    cfg.horizon = static_cast<std::uint64_t>(arrivals);
    cfg.warmup = 0;
    cfg.start = QueueStart::stationary;
    cfg.seed = 77;
    cfg.stream = static_cast<std::uint64_t>(t);
    const TailEstimate est = simulate_tail_probability(cfg);
    const double z = est.std_error > 0 ? std::abs(est.estimate - analytic) / est.std_error : 0.0;
    worst = std::max(worst, z);
    agree += z <= 3.0;
    if (z > 3.0) misses += fmt("; miss at rho=%.3f K=%.0f |z|=%.2f", rho, k, z);
  }
  return {agree == instances, fmt("%.0f/%.0f instances within 3 SE at 1e5 arrivals, worst |z| = %.2f", agree,
                                  instances, worst) +
                                  misses};
}

Outcome dp_vs_enumeration() {
  std::mt19937_64 rng(2024);
  int compared = 0, equal = 0;
  double worst = 0.0;
  for (int t = 0; t < 24; ++t) {
    testsupport::SmallShape shape;
    shape.relays = 1 + t % 2;
    shape.slots = 1 + t % 3;
    const SystemModel m(testsupport::small_scenario(rng, shape));
    long joint = 0;
    const std::vector<long> start(static_cast<std::size_t>(m.rs_count()), m.initial_level());
    const double oracle = testsupport::brute_force(m, 0, start, &joint);
    if (joint > 200) continue;
    const double dp = exact_dp(m).total_cost;
    worst = std::max(worst, std::abs(dp - oracle) / std::max(1.0, std::abs(oracle)));
    equal += close_rel(dp, oracle, 1e-9);
    ++compared;
  }
  return {compared >= 10 && equal == compared,
          fmt("%.0f/%.0f instances equal (N<=2, I<=3, <=200 joint actions), worst rel diff %.1e", equal, compared,
              worst)};
}

Outcome structural_identities() {
  std::mt19937_64 rng(31);
  int same_cost = 0;
  for (int t = 0; t < 10; ++t) {
    testsupport::SmallShape shape;
    shape.relays = 1;
    shape.slots = 2 + t % 4;
    shape.levels = 6;
    const SystemModel m(testsupport::small_scenario(rng, shape));
    same_cost += close_rel(exact_dp(m).total_cost, reduced_dp(m).total_cost, 1e-9);
  }
  int same_decisions = 0;
  for (int t = 0; t < 10; ++t) {
    testsupport::SmallShape shape;
    shape.relays = 1 + t % 4;
    shape.slots = 1;
    const SystemModel m(testsupport::small_scenario(rng, shape));
    same_decisions += reduced_dp(m).sleep == greedy(m).sleep;
  }
  // One slot of the full default scenario too.
  Scenario one = default_scenario();
  one.slots = {one.slots[19]};
  one.weights = CostWeights::uniform(one.weights.psi, 1);
  const SystemModel m(one);
  const bool full = reduced_dp(m).sleep == greedy(m).sleep;
  return {same_cost == 10 && same_decisions == 10 && full,
          fmt("N=1 cost equal on %.0f/10; I=1 decisions equal on %.0f/10 random and %.0f/1 default", same_cost,
              same_decisions, full)};
}

std::vector<double> column(const std::vector<SweepCell>& cells, Algorithm alg, double (*get)(const SleepPolicy&)) {
  std::vector<double> v;
  for (const SweepCell& c : cells) {
    if (c.algorithm == alg) v.push_back(get(c.policy));
  }
  return v;
}

double power_of(const SleepPolicy& p) { return p.mean_grid_power_w(); }
double blocking_of(const SleepPolicy& p) { return p.mean_blocking; }
double cost_of(const SleepPolicy& p) { return p.total_cost; }

Outcome traffic_sweep() {
  const std::vector<double> scales{0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
  const auto cells =
      run_sweep(default_scenario(), SweepAxis::traffic_scale, scales, {Algorithm::reduced_dp, Algorithm::greedy});
  std::string bad;
  for (Algorithm a : {Algorithm::reduced_dp, Algorithm::greedy}) {
    if (!non_decreasing(column(cells, a, power_of))) bad += std::string(" power(") + std::string(to_string(a)) + ")";
    if (!non_decreasing(column(cells, a, blocking_of))) {
      bad += std::string(" blocking(") + std::string(to_string(a)) + ")";
    }
  }
  const auto rc = column(cells, Algorithm::reduced_dp, cost_of), gc = column(cells, Algorithm::greedy, cost_of);
  double margin = 0.0;
  for (std::size_t k = 0; k < rc.size(); ++k) {
    if (rc[k] > gc[k] * (1.0 + 1e-9)) bad += " cost@" + fmt("%g", scales[k]);
    margin = std::max(margin, (gc[k] - rc[k]) / gc[k]);
  }
  return {bad.empty(), bad.empty() ? fmt("scale 0.25..1.5 (%.0f points): monotone for both; reduced-dp cost <= greedy, "
                                         "largest saving %.2f%%",
                                         static_cast<double>(scales.size()), 100.0 * margin)
                                   : "violations:" + bad};
}

Outcome psi_sweep() {
  const std::vector<double> psis{0.0, 1e7, 2e7, 5e7, 1e8, 1e9};
  const auto cells = run_sweep(default_scenario(), SweepAxis::psi, psis, {Algorithm::reduced_dp, Algorithm::greedy});
  const auto rp = column(cells, Algorithm::reduced_dp, power_of), rb = column(cells, Algorithm::reduced_dp, blocking_of);
  const auto gp = column(cells, Algorithm::greedy, power_of), gb = column(cells, Algorithm::greedy, blocking_of);
  std::string bad;
  if (!non_increasing(rb)) bad += " blocking not non-increasing";
  if (!non_decreasing(rp)) bad += " power not non-decreasing";
  int dominated = 0;
  for (std::size_t g = 0; g < gp.size(); ++g) {
    bool found = false;
    for (std::size_t r = 0; r < rp.size() && !found; ++r) {
      found = rb[r] <= gb[g] * (1.0 + 1e-9) && rp[r] <= gp[g] * (1.0 + 1e-9);
    }
    dominated += found;
  }
  if (dominated != static_cast<int>(gp.size())) bad += " greedy point not dominated";
  return {bad.empty(), bad.empty() ? fmt("psi 0..1e9 (%.0f points): reduced-dp blocking %.4f -> %.4f, power "
                                         "monotone; ",
                                         static_cast<double>(psis.size()), rb.front(), rb.back()) +
                                         fmt("every greedy point (%.0f/%.0f) weakly dominated", dominated,
                                             static_cast<double>(gp.size()))
                                   : "violations:" + bad};
}

Outcome invariants() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long battery = 0, probs = 0, ledger = 0, affine = 0, clamps = 0;
  std::string bad;

  for (int d = 0; d < 1000; ++d) {
    testsupport::SmallShape shape;
    shape.relays = 1 + d % 3;
    shape.slots = 1 + d % 4;
    Scenario s = testsupport::small_scenario(rng, shape);
    const SystemModel m(s);
    SleepMatrix sleep(s.slots.size(), std::vector<double>(static_cast<std::size_t>(shape.relays)));
    for (auto& row : sleep) {
      for (double& v : row) v = u(rng) < 0.3 ? 0.0 : u(rng);
    }
    const SleepPolicy p = evaluate_policy(m, sleep);
    const double cap = s.battery.capacity_j;
    for (std::size_t i = 0; i < p.slots.size(); ++i) {
      const SlotMetrics& sm = p.slots[i];
      const SlotInputs& in = s.slots[i];
      if (!(sm.bs_blocking >= 0 && sm.bs_blocking <= 1 && sm.system_blocking >= 0 && sm.system_blocking <= 1)) {
        bad = "probability out of range";
      }
      ++probs;
      for (std::size_t k = 0; k < sm.sleep.size(); ++k) {
        if (!(sm.rs_blocking[k] >= 0 && sm.rs_blocking[k] <= 1)) bad = "probability out of range";
        if (!(sm.battery_end_j[k] >= 0 && sm.battery_end_j[k] <= cap)) bad = "battery out of bounds";
        ++battery;

        const BatteryStep& st = sm.ledger[k];
        if (!sm.forced_sleep[k]) {
          const double in_j = st.harvested_j + st.drawn_j, out_j = st.consumed_j + st.stored_j + st.spilled_j();
          if (std::abs(in_j - out_j) > 1e-9 * std::max({1.0, st.consumed_j, st.harvested_j})) bad = "ledger";
          if (std::abs(sm.battery_start_j[k] - st.drawn_j + st.stored_j - sm.battery_end_j[k]) > 1e-9 * cap) {
            bad = "ledger";
          }
          ++ledger;

          // Applied ratio is the request raised to the smallest affordable one.
          const double floor_phi = max_sleep_ratio(sm.battery_start_j[k], in.rs_harvest_w[k],
                                                   m.slot(i).rs_active_w[k], s.power.rs_sleep_w, in.length_s);
          const double want = std::max(sleep[i][k], floor_phi);
          if (std::abs(sm.sleep[k] - want) > 1e-9) bad = "clamping";
          if (sm.clamped[k] != (sleep[i][k] < floor_phi - 1e-12)) bad = "clamp flag";
          ++clamps;
        }
      }
    }
  }

  const PowerParams pp;
  std::uniform_real_distribution<double> hz(0.0, 1e6), len(1.0, 7200.0);
  for (int d = 0; d < 1000; ++d) {
    const double used = hz(rng), L = len(rng), a = u(rng), b = u(rng), t = u(rng);
    const double lhs = rs_slot_energy(used, 1e6, t * a + (1 - t) * b, pp, L);
    const double rhs = t * rs_slot_energy(used, 1e6, a, pp, L) + (1 - t) * rs_slot_energy(used, 1e6, b, pp, L);
    if (!close_rel(lhs, rhs, 1e-12)) bad = "energy not affine in sleep ratio";
    ++affine;
  }

  const bool enough = std::min({battery, probs, ledger, affine, clamps}) >= 1000;
  if (!enough) bad += " too few draws";
  return {bad.empty(), (bad.empty() ? std::string("all hold") : "violation: " + bad) +
                           fmt("; draws: battery %.0f, probability %.0f, ", battery, probs) +
                           fmt("ledger %.0f, affinity %.0f, clamping %.0f", ledger, affine, clamps)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "relaysleep-acceptance";
  fs::remove_all(root);
  const fs::path scenario = fs::path(RELAYSLEEP_SOURCE_DIR) / "scenarios" / "default.json";
  std::vector<std::string> csvs;
  for (const char* tag : {"a", "b", "c"}) {
    const std::string cmd = std::string("\"") + RELAYSLEEP_CLI + "\" run --scenario \"" + scenario.string() +
                            "\" --seed 42 --out \"" + (root / tag).string() + "\" >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "run failed"};
    csvs.push_back(slurp(root / tag / "slots.csv"));
  }
  const bool same = !csvs[0].empty() && csvs[0] == csvs[1] && csvs[1] == csvs[2];
  fs::remove_all(root);
  return {same, same ? fmt("3 runs, slots.csv identical (%.0f bytes)", static_cast<double>(csvs[0].size()))
                     : "slots.csv differs between runs"};
}

}  // namespace

int main() {
  criterion("oracle-blocking", 60.0, oracle_blocking);
  criterion("dp-vs-enumeration", 10.0, dp_vs_enumeration);
  criterion("structural-identities", 30.0, structural_identities);
  criterion("traffic-sweep-monotone", 0.0, traffic_sweep);
  criterion("psi-sweep-tradeoff", 0.0, psi_sweep);
  criterion("invariant-suites", 60.0, invariants);
  criterion("run-determinism", 0.0, determinism);
  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
