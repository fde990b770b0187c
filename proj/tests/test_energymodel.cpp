#include <doctest.h>

#include <cmath>
#include <random>

#include "relaysleep/energymodel.hpp"
#include "relaysleep/error.hpp"
#include "support.hpp"

using namespace relaysleep;

TEST_CASE("BS slot energy") {
  const PowerParams p;
  CHECK(bs_slot_energy(0.0, 15e6, p, 3600.0) == 750.0 * 3600.0);
  CHECK(bs_slot_energy(15e6, 15e6, p, 3600.0) == doctest::Approx(5479200.0));
  const double mid = bs_slot_energy(7.5e6, 15e6, p, 3600.0);
  CHECK(mid == doctest::Approx(0.5 * (750.0 * 3600.0 + 5479200.0)));
  CHECK_THROWS_AS(bs_slot_energy(1.0, 0.0, p, 3600.0), Error);
}

TEST_CASE("RS slot energy") {
  PowerParams p;
  CHECK(rs_slot_energy(5.0, 10.0, 1.0, p, 3600.0) == 10.0 * 3600.0);
  CHECK(rs_slot_energy(0.0, 10.0, 0.0, p, 3600.0) == 40.0 * 3600.0);
  // Active draw 50 W, sleep 10 W, half asleep for 1 s.
  p.rs_static_w = 50.0;
  CHECK(rs_slot_energy(0.0, 10.0, 0.5, p, 1.0) == doctest::Approx(30.0));
}

TEST_CASE("RS energy is affine in the sleep ratio") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0), hz(0.0, 1e6), len(1.0, 7200.0);
  const PowerParams p;
  for (int k = 0; k < 1000; ++k) {
    const double limit = 1e6, used = hz(rng), L = len(rng), a = u(rng), b = u(rng), t = u(rng);
    const double mix = t * a + (1.0 - t) * b;
    const double lhs = rs_slot_energy(used, limit, mix, p, L);
    const double rhs = t * rs_slot_energy(used, limit, a, p, L) + (1.0 - t) * rs_slot_energy(used, limit, b, p, L);
    REQUIRE(testsupport::close_rel(lhs, rhs, 1e-12));
  }
}

TEST_CASE("max sleep ratio") {
  CHECK(max_sleep_ratio(0.0, 30.0, 50.0, 10.0, 1.0) == doctest::Approx(0.5));
  CHECK(max_sleep_ratio(20.0, 30.0, 50.0, 10.0, 1.0) == 0.0);   // covers full activity
  CHECK(max_sleep_ratio(40.0, 30.0, 50.0, 10.0, 1.0) == 0.0);
  CHECK(max_sleep_ratio(-20.0, 30.0, 50.0, 10.0, 1.0) == 1.0);  // exactly full sleep
  CHECK(max_sleep_ratio(-25.0, 30.0, 50.0, 10.0, 1.0) == 1.0);  // clamped

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> c(-1e5, 1e5), h(0.0, 200.0), pa(11.0, 500.0);
  for (int k = 0; k < 1000; ++k) {
    const double phi = max_sleep_ratio(c(rng), h(rng), pa(rng), 10.0, 3600.0);
    REQUIRE((phi >= 0.0 && phi <= 1.0));
  }
}

TEST_CASE("battery step") {
  // Harvest exactly covers the draw.
  BatteryStep s = battery_step(100.0, 40.0, 0.0, 40.0, 10.0, 1.0, 1000.0);
  CHECK(s.next_j == 100.0);
  // Overflow at the capacity bound.
  s = battery_step(1000.0, 100.0, 0.0, 40.0, 10.0, 1.0, 1000.0);
  CHECK(s.next_j == 1000.0);
  CHECK(s.overflow_j == doctest::Approx(60.0));
  // Needs 10 J with 5 stored and 2 harvested.
  try {
    battery_step(5.0, 2.0, 1.0, 40.0, 10.0, 1.0, 1000.0);
    FAIL("expected infeasible-action");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::infeasible_action);
  }
}

TEST_CASE("quantized step floors to the grid") {
  const BatteryStep s = quantized_battery_step(100.0, 47.0, 0.0, 40.0, 10.0, 1.0, 1000.0, 10.0);
  CHECK(s.next_j == 100.0);
  CHECK(s.quantization_j == doctest::Approx(7.0));
  CHECK(grid_index(29.999999999999996, 10.0) == 3);
  CHECK(grid_index(29.9, 10.0) == 2);
}

TEST_CASE("battery invariants and energy ledger over random draws") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0), h(0.0, 200.0), pa(11.0, 500.0), len(60.0, 7200.0);
  const double cap = 7.2e6, unit = 12e3;
  int checked = 0;
  for (int k = 0; k < 5000; ++k) {
    const double level = unit * std::floor(u(rng) * cap / unit);
    const double H = h(rng), P = pa(rng), L = len(rng);
    const ActionSet set = enumerate_actions(level, H, P, 10.0, L, cap, unit);
    REQUIRE(!set.actions.empty());
    if (set.forced_sleep) continue;
    for (const Action& a : set.actions) {
      const BatteryStep s = quantized_battery_step(level, H, a.sleep, P, 10.0, L, cap, unit);
      REQUIRE((s.next_j >= 0.0 && s.next_j <= cap));
      REQUIRE(std::abs(s.next_j / unit - std::round(s.next_j / unit)) < 1e-9);
      const double in = s.harvested_j + s.drawn_j;
      const double out = s.consumed_j + s.stored_j + s.spilled_j();
      REQUIRE(std::abs(in - out) <= 1e-9 * std::max(s.consumed_j, s.harvested_j));
      REQUIRE(std::abs(level - s.drawn_j + s.stored_j - s.next_j) <= 1e-9 * cap);
      ++checked;
    }
  }
  CHECK(checked >= 1000);
}

TEST_CASE("action enumeration") {
  // P=50, Ps=10, H=30, B=40, L=1, unit 10.
  const ActionSet set = enumerate_actions(40.0, 30.0, 50.0, 10.0, 1.0, 100.0, 10.0);
  REQUIRE(set.actions.size() == 5);
  const double drawn[] = {-20.0, -10.0, 0.0, 10.0, 20.0};
  const double sleep[] = {1.0, 0.75, 0.5, 0.25, 0.0};
  for (int k = 0; k < 5; ++k) {
    CHECK(set.actions[k].drawn_j == doctest::Approx(drawn[k]));
    CHECK(set.actions[k].sleep == doctest::Approx(sleep[k]));
  }

  // H = Ps: lower bound is zero draw, sleep spans up to 1.
  const ActionSet hs = enumerate_actions(40.0, 10.0, 50.0, 10.0, 1.0, 100.0, 10.0);
  CHECK(hs.actions.front().drawn_j == 0.0);
  CHECK(hs.actions.front().sleep == 1.0);

  // Empty battery, harvest covers full activity: every candidate means phi = 0.
  const ActionSet rich = enumerate_actions(0.0, 60.0, 50.0, 10.0, 1.0, 100.0, 10.0);
  CHECK(rich.actions.back().sleep == 0.0);
  for (const Action& a : rich.actions) CHECK(a.drawn_j <= 0.0);

  // Not even sleep is affordable.
  const ActionSet forced = enumerate_actions(5.0, 0.0, 50.0, 10.0, 1.0, 100.0, 10.0);
  CHECK(forced.forced_sleep);
  REQUIRE(forced.actions.size() == 1);
  CHECK(forced.actions[0].sleep == 1.0);
}
