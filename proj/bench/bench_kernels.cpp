// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to vary the
// thread count of the parallel variants.
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "relaysleep/mcoracle.hpp"
#include "relaysleep/policy.hpp"

using namespace relaysleep;

namespace {

// Two relays with a fine battery grid: large enough for the joint DP to matter.
const SystemModel& exact_model() {
  static const SystemModel m = [] {
    Scenario s = default_scenario(DefaultProfile{2, 24});
    s.battery.grid_unit_j = s.battery.capacity_j / 40.0;
    return SystemModel(s);
  }();
  return m;
}

const SystemModel& default_model() {
  static const SystemModel m(default_scenario());
  return m;
}

void BM_ExactReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::exact_backward(exact_model()));
}

void BM_Exact(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact_dp(exact_model(), exec));
}

void BM_ReducedReference(benchmark::State& state) {
  const SystemModel& m = default_model();
  for (auto _ : state) {
    for (int k = 0; k < m.rs_count(); ++k) benchmark::DoNotOptimize(reference::reduced_backward(m, k));
  }
}

void BM_Reduced(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) benchmark::DoNotOptimize(solve_reduced_dp(default_model(), exec));
}

void BM_SlotSimulation(benchmark::State& state) {
  const SystemModel& m = default_model();
  const std::vector<double> sleep(static_cast<std::size_t>(m.rs_count()), 0.25);
  SlotSimOptions opt;
  opt.replications = 200;
  opt.exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_slot_blocking(m, 19, sleep, opt));
}

}  // namespace

BENCHMARK(BM_ExactReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Exact)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReducedReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reduced)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SlotSimulation)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
