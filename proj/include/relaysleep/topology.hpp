#pragma once

#include <vector>

namespace relaysleep {

enum class LinkKind { direct, access, backhaul };

const char* to_string(LinkKind kind);

/// BS coverage disc of radius `bs_radius_m` with `rs_count` relays on a ring
/// of radius R - 2r. Each relay covers a disc of radius r.
struct CellLayout {
  double bs_radius_m = 0.0;
  double rs_half_width_m = 0.0;
  int rs_count = 0;
  double rs_distance_m = 0.0;
  std::vector<double> rs_angles_rad;

  double rs_area_m2() const;
  /// Area of the BS-only region (coverage minus all relay discs).
  double bs_only_area_m2() const;
};

CellLayout build_layout(double bs_radius_m, double rs_half_width_m, int rs_count);

/// dB path-loss law PL(d) = intercept + slope * log10(d), d in meters.
struct PathLoss {
  double intercept_db = 0.0;
  double slope_db = 0.0;
  /// Interference power at the receiver (W), treated as extra noise.
  double interference_w = 0.0;
  /// Band over which the transmitter spreads its power; the noise power is
  /// N0 times this band.
  double reference_bandwidth_hz = 30e6;
};

struct LinkModel {
  PathLoss direct;
  PathLoss access;
  PathLoss backhaul;
  double bs_tx_power_w = 40.0;
  double rs_tx_power_w = 40.0;
  double noise_density_dbm_hz = -174.0;

  const PathLoss& params(LinkKind kind) const;
  double tx_power_w(LinkKind kind) const;
  double noise_density_w_hz() const;
};

/// Linear path gain 10^(-PL(d)/10).
double path_gain(const PathLoss& pl, double distance_m);

double link_sinr(LinkKind kind, double distance_m, const LinkModel& model);

/// Spectral efficiency log2(1 + SINR) in bit/s/Hz.
double link_rate(LinkKind kind, double distance_m, const LinkModel& model);

/// Bandwidth (Hz) a user with rate requirement `rate_bps` needs on the link.
double bandwidth_demand(LinkKind kind, double distance_m, double rate_bps, const LinkModel& model);

/// Integral of l / C(l) over [lo, hi] for the given link kind.
double radial_inverse_rate_integral(LinkKind kind, double lo_m, double hi_m, const LinkModel& model);

}  // namespace relaysleep
