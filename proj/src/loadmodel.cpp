#include "relaysleep/loadmodel.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "relaysleep/error.hpp"

namespace relaysleep {

double SlotTraffic::total_arrival() const {
  return std::accumulate(rs_arrival.begin(), rs_arrival.end(), bs_arrival);
}

ResourceSplit resource_split(const SlotTraffic& traffic, double total_hz) {
  const double total = traffic.total_arrival();
  require(total > 0.0, Errc::zero_total_traffic, "cannot split bandwidth with no arriving traffic");
  ResourceSplit split;
  split.total_hz = total_hz;
  split.bs_limit_hz = total_hz * traffic.bs_arrival / total;
  split.rs_limit_hz.reserve(traffic.rs_arrival.size());
  for (double lambda : traffic.rs_arrival) split.rs_limit_hz.push_back(total_hz * lambda / total);
  return split;
}

DemandIntegrals demand_integrals(const CellLayout& layout, const LinkModel& links) {
  const double ring = layout.rs_distance_m;
  DemandIntegrals out;
  out.inner_direct = radial_inverse_rate_integral(LinkKind::direct, 0.0, ring, links);
  out.edge_direct = radial_inverse_rate_integral(LinkKind::direct, ring, layout.bs_radius_m, links);
  out.backhaul_rate = link_rate(LinkKind::backhaul, ring, links);
  require(out.backhaul_rate > 0.0, Errc::zero_rate_link, "backhaul efficiency underflows");
  out.access = radial_inverse_rate_integral(LinkKind::access, 0.0, layout.rs_half_width_m, links);
  return out;
}

double relay_gain(const CellLayout& layout, const DemandIntegrals& integrals) {
  const double ring = layout.rs_distance_m;
  const double radial = 0.5 * (layout.bs_radius_m * layout.bs_radius_m - ring * ring);
  return integrals.edge_direct / (radial / integrals.backhaul_rate);
}

double relay_gain(const CellLayout& layout, const LinkModel& links, int n) {
  require(n >= 0 && n < layout.rs_count, Errc::invalid_argument, "relay index out of range");
  // Relays sit on one ring, so the gain is the same for all of them.
  return relay_gain(layout, demand_integrals(layout, links));
}

double effective_bs_arrival(const SlotTraffic& traffic, std::span<const double> sleep,
                            std::span<const double> gain) {
  require(sleep.size() == traffic.rs_arrival.size() && gain.size() == sleep.size(), Errc::dimension_mismatch,
          "sleep ratios and gains must have one entry per relay");
  double out = traffic.bs_arrival;
  for (std::size_t n = 0; n < sleep.size(); ++n) {
    const double lambda = traffic.rs_arrival[n];
    out += lambda * (1.0 - sleep[n]) / gain[n] + lambda * sleep[n];
  }
  return out;
}

double gamma0(const CellLayout& layout, const DemandIntegrals& integrals, const SlotTraffic& traffic,
              std::span<const double> sleep, std::span<const double> gain) {
  require(sleep.size() == traffic.rs_arrival.size() && gain.size() == sleep.size(), Errc::dimension_mismatch,
          "sleep ratios and gains must have one entry per relay");
  const double r0 = traffic.rate_requirement_bps;
  const double ring = layout.rs_distance_m;
  const double r = layout.rs_half_width_m;
  const double inner_mean = 2.0 * r0 / (ring * ring) * integrals.inner_direct;

  // Unnormalized W0 / K0' (both multiplied by lambda_0), so lambda_0 = 0 works.
  double demand = traffic.bs_arrival * inner_mean;
  double users = traffic.bs_arrival;
  const double edge_mean = 2.0 * r0 / (layout.rs_count * r * r) * integrals.edge_direct;
  for (std::size_t n = 0; n < sleep.size(); ++n) {
    const double lambda = traffic.rs_arrival[n];
    const double backhauled = lambda * (1.0 - sleep[n]) / gain[n];
    demand += backhauled * r0 / integrals.backhaul_rate;
    demand += lambda * sleep[n] * edge_mean;
    users += backhauled + lambda * sleep[n];
  }
  if (users <= 0.0) return inner_mean;
  return demand / users;
}

double gamma0(const CellLayout& layout, const LinkModel& links, const SlotTraffic& traffic,
              std::span<const double> sleep, std::span<const double> gain) {
  return gamma0(layout, demand_integrals(layout, links), traffic, sleep, gain);
}

double gamma_n(const CellLayout& layout, const DemandIntegrals& integrals, double rate_bps) {
  const double r = layout.rs_half_width_m;
  return 2.0 * rate_bps / (r * r) * integrals.access;
}

double gamma_n(const CellLayout& layout, const LinkModel& links, double rate_bps) {
  const double integral = radial_inverse_rate_integral(LinkKind::access, 0.0, layout.rs_half_width_m, links);
  const double r = layout.rs_half_width_m;
  return 2.0 * rate_bps / (r * r) * integral;
}

double station_load(double arrival, double service_rate) {
  require(arrival >= 0.0 && service_rate > 0.0, Errc::invalid_argument, "need lambda >= 0 and mu > 0");
  return arrival / (arrival + service_rate);
}

Utilization expected_utilization(double rho, double gamma, double limit_hz) {
  if (rho >= 1.0) return {limit_hz, true};
  const double mean = gamma * rho / (1.0 - rho);
  if (mean >= limit_hz) return {limit_hz, true};
  return {mean, false};
}

double admission_threshold(double limit_hz, double gamma) {
  require(gamma > 0.0, Errc::invalid_argument, "per-user demand must be positive");
  return std::ceil(limit_hz / gamma);
}

double blocking_geometric(double rho, double limit_hz, double gamma) {
  if (rho >= 1.0) return 1.0;
  return std::pow(rho, admission_threshold(limit_hz, gamma));
}

double rs_blocking(double sleep, double rho, double limit_hz, double gamma) {
  require(sleep >= 0.0 && sleep <= 1.0, Errc::invalid_argument, "sleep ratio must lie in [0,1]");
  return sleep + (1.0 - sleep) * blocking_geometric(rho, limit_hz, gamma);
}

double system_blocking(const SlotTraffic& traffic, double bs_blocking, std::span<const double> rs_blocking) {
  require(rs_blocking.size() == traffic.rs_arrival.size(), Errc::dimension_mismatch,
          "need one blocking value per relay");
  const double total = traffic.total_arrival();
  require(total > 0.0, Errc::zero_total_traffic, "blocking mixture undefined with no traffic");
  double out = bs_blocking * traffic.bs_arrival;
  for (std::size_t n = 0; n < rs_blocking.size(); ++n) out += rs_blocking[n] * traffic.rs_arrival[n];
  return out / total;
}

}  // namespace relaysleep
