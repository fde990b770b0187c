#pragma once

#include <span>
#include <vector>

#include "relaysleep/topology.hpp"

namespace relaysleep {

/// Poisson arrival rates of one slot: BS-only region and each relay disc.
struct SlotTraffic {
  double bs_arrival = 0.0;
  std::vector<double> rs_arrival;
  double service_rate = 1.0;
  double rate_requirement_bps = 0.0;

  double total_arrival() const;
};

/// Bandwidth limits per station, proportional to arriving traffic.
struct ResourceSplit {
  double bs_limit_hz = 0.0;
  std::vector<double> rs_limit_hz;
  double total_hz = 0.0;
};

ResourceSplit resource_split(const SlotTraffic& traffic, double total_hz);

/// Geometry-only integrals feeding the per-user demand terms. They do not
/// change between slots, so a scenario computes them once.
struct DemandIntegrals {
  double inner_direct = 0.0;  ///< int_0^{R-2r} l / C_DL(l) dl
  double edge_direct = 0.0;   ///< int_{R-2r}^{R} l / C_DL(l) dl
  double backhaul_rate = 0.0; ///< C_BL(R - 2r)
  double access = 0.0;        ///< int_0^{r} l / C_AL(l) dl
};

DemandIntegrals demand_integrals(const CellLayout& layout, const LinkModel& links);

/// Multiple by which BS demand grows when relay n's users are served on the
/// direct link instead of through the backhaul.
double relay_gain(const CellLayout& layout, const LinkModel& links, int n);
double relay_gain(const CellLayout& layout, const DemandIntegrals& integrals);

/// Users per second the BS actually carries given the sleep ratios.
double effective_bs_arrival(const SlotTraffic& traffic, std::span<const double> sleep,
                            std::span<const double> gain);

/// Mean BS bandwidth demand per served user (Hz).
double gamma0(const CellLayout& layout, const DemandIntegrals& integrals, const SlotTraffic& traffic,
              std::span<const double> sleep, std::span<const double> gain);
double gamma0(const CellLayout& layout, const LinkModel& links, const SlotTraffic& traffic,
              std::span<const double> sleep, std::span<const double> gain);

/// Mean relay bandwidth demand per user (Hz). Same for every relay.
double gamma_n(const CellLayout& layout, const DemandIntegrals& integrals, double rate_bps);
double gamma_n(const CellLayout& layout, const LinkModel& links, double rate_bps);

/// rho = lambda / (lambda + mu).
double station_load(double arrival, double service_rate);

struct Utilization {
  double hz = 0.0;
  bool saturated = false;
};

/// Stationary mean demand gamma * rho / (1 - rho), clamped to the limit.
Utilization expected_utilization(double rho, double gamma, double limit_hz);

/// ceil(limit / gamma): number of users a station admits.
double admission_threshold(double limit_hz, double gamma);

/// rho^ceil(limit / gamma); 1 when rho >= 1.
double blocking_geometric(double rho, double limit_hz, double gamma);

/// Blocking seen by users of a relay that sleeps a fraction `sleep` of the slot.
double rs_blocking(double sleep, double rho, double limit_hz, double gamma);

/// Arrival-weighted mixture of per-station blocking.
double system_blocking(const SlotTraffic& traffic, double bs_blocking, std::span<const double> rs_blocking);

}  // namespace relaysleep
