#include "relaysleep/topology.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "relaysleep/error.hpp"
#include "relaysleep/quadrature.hpp"

namespace relaysleep {

const char* to_string(LinkKind kind) {
  switch (kind) {
    case LinkKind::direct: return "DL";
    case LinkKind::access: return "AL";
    case LinkKind::backhaul: return "BL";
  }
  return "?";
}

double CellLayout::rs_area_m2() const {
  return std::numbers::pi * rs_half_width_m * rs_half_width_m;
}

double CellLayout::bs_only_area_m2() const {
  return std::numbers::pi * bs_radius_m * bs_radius_m - rs_count * rs_area_m2();
}

CellLayout build_layout(double bs_radius_m, double rs_half_width_m, int rs_count) {
  require(rs_half_width_m > 0.0 && bs_radius_m > 2.0 * rs_half_width_m, Errc::invalid_geometry,
          "need R > 2r > 0 (R=" + std::to_string(bs_radius_m) + ", r=" + std::to_string(rs_half_width_m) + ")");
  require(rs_count >= 1, Errc::invalid_geometry, "need at least one relay");

  CellLayout layout;
  layout.bs_radius_m = bs_radius_m;
  layout.rs_half_width_m = rs_half_width_m;
  layout.rs_count = rs_count;
  layout.rs_distance_m = bs_radius_m - 2.0 * rs_half_width_m;
  layout.rs_angles_rad.reserve(static_cast<std::size_t>(rs_count));
  for (int k = 0; k < rs_count; ++k) {
    layout.rs_angles_rad.push_back(2.0 * std::numbers::pi * k / rs_count);
  }
  require(layout.bs_only_area_m2() > 0.0, Errc::invalid_geometry,
          std::to_string(rs_count) + " relay discs cover the whole cell");
  return layout;
}

const PathLoss& LinkModel::params(LinkKind kind) const {
  switch (kind) {
    case LinkKind::direct: return direct;
    case LinkKind::access: return access;
    case LinkKind::backhaul: return backhaul;
  }
  return direct;
}

double LinkModel::tx_power_w(LinkKind kind) const {
  return kind == LinkKind::access ? rs_tx_power_w : bs_tx_power_w;
}

double LinkModel::noise_density_w_hz() const {
  return std::pow(10.0, noise_density_dbm_hz / 10.0) * 1e-3;
}

double path_gain(const PathLoss& pl, double distance_m) {
  return std::pow(10.0, -(pl.intercept_db + pl.slope_db * std::log10(distance_m)) / 10.0);
}

double link_sinr(LinkKind kind, double distance_m, const LinkModel& model) {
  require(distance_m > 0.0, Errc::non_positive_distance, "link distance must be positive");
  const PathLoss& pl = model.params(kind);
  const double noise = model.noise_density_w_hz() * pl.reference_bandwidth_hz;
  return model.tx_power_w(kind) * path_gain(pl, distance_m) / (noise + pl.interference_w);
}

double link_rate(LinkKind kind, double distance_m, const LinkModel& model) {
  // log1p keeps precision when the SINR is tiny.
  return std::log1p(link_sinr(kind, distance_m, model)) / std::numbers::ln2;
}

double bandwidth_demand(LinkKind kind, double distance_m, double rate_bps, const LinkModel& model) {
  const double rate = link_rate(kind, distance_m, model);
  require(rate > 0.0, Errc::zero_rate_link,
          std::string(to_string(kind)) + " efficiency underflows at d=" + std::to_string(distance_m));
  return rate_bps / rate;
}

double radial_inverse_rate_integral(LinkKind kind, double lo_m, double hi_m, const LinkModel& model) {
  require(lo_m >= 0.0 && hi_m > lo_m, Errc::invalid_argument, "need 0 <= lo < hi");
  // Efficiency is decreasing in distance, so the far end bounds it from below.
  require(link_rate(kind, hi_m, model) > 0.0, Errc::integrand_singularity,
          std::string(to_string(kind)) + " efficiency vanishes inside the interval");
  auto integrand = [&](double l) {
    if (l <= 0.0) return 0.0;  // l / C(l) -> 0 as l -> 0 since C grows without bound
    return l / link_rate(kind, l, model);
  };
  return integrate_adaptive(integrand, lo_m, hi_m, 1e-10);
}

}  // namespace relaysleep
