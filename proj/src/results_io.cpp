#include "relaysleep/results_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "relaysleep/error.hpp"

namespace relaysleep {

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string slots_csv(const SleepPolicy& policy) {
  const std::size_t n = policy.sleep.empty() ? 0 : policy.sleep.front().size();
  std::ostringstream out;
  out << "slot";
  for (std::size_t k = 1; k <= n; ++k) out << ",phi_" << k;
  out << ",e0_j";
  for (std::size_t k = 1; k <= n; ++k) out << ",e_" << k << "_j";
  for (std::size_t k = 1; k <= n; ++k) out << ",battery_" << k << "_j";
  out << ",p_blk,p0_blk,lambda0_eff,w0_util,bs_saturated,rs_saturated,clamped,stage_cost\r\n";

  for (std::size_t s = 0; s < policy.slots.size(); ++s) {
    const SlotMetrics& m = policy.slots[s];
    out << s + 1;
    for (double phi : m.sleep) out << ',' << format_number(phi);
    out << ',' << format_number(m.bs_energy_j);
    for (double e : m.rs_energy_j) out << ',' << format_number(e);
    for (double b : m.battery_end_j) out << ',' << format_number(b);
    bool clamped = false;
    for (bool c : m.clamped) clamped = clamped || c;
    out << ',' << format_number(m.system_blocking) << ',' << format_number(m.bs_blocking) << ','
        << format_number(m.lambda0_eff) << ',' << format_number(m.bs_used_hz / m.bs_limit_hz) << ','
        << (m.bs_saturated ? 1 : 0) << ',' << (m.rs_saturated ? 1 : 0) << ',' << (clamped ? 1 : 0) << ','
        << format_number(m.stage_cost) << "\r\n";
  }
  return out.str();
}

RunSummary summarize(const SleepPolicy& policy, double wall_time_s, std::uint64_t seed) {
  RunSummary s;
  s.algorithm = std::string(to_string(policy.algorithm));
  s.slots = policy.slots.size();
  s.relays = policy.sleep.empty() ? 0 : static_cast<int>(policy.sleep.front().size());
  s.total_grid_energy_j = policy.total_grid_energy_j;
  s.mean_grid_power_w = policy.mean_grid_power_w();
  s.mean_blocking = policy.mean_blocking;
  s.weighted_cost = policy.total_cost;
  s.wall_time_s = wall_time_s;
  s.seed = seed;
  s.any_clamped = policy.any_clamped;
  return s;
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json doc;
  doc["algorithm"] = s.algorithm;
  doc["slots"] = s.slots;
  doc["relays"] = s.relays;
  doc["total_grid_energy_j"] = s.total_grid_energy_j;
  doc["mean_grid_power_w"] = s.mean_grid_power_w;
  doc["mean_blocking"] = s.mean_blocking;
  doc["weighted_cost"] = s.weighted_cost;
  doc["wall_time_s"] = s.wall_time_s;
  doc["seed"] = s.seed;
  doc["any_clamped"] = s.any_clamped;
  return doc.dump(2) + "\n";
}

std::string tradeoff_csv(const std::vector<TradeoffRow>& rows) {
  std::ostringstream out;
  out << "value,algorithm,mean_grid_power_w,mean_blocking\r\n";
  for (const TradeoffRow& r : rows) {
    out << format_number(r.value) << ',' << r.algorithm << ',' << format_number(r.mean_grid_power_w) << ','
        << format_number(r.mean_blocking) << "\r\n";
  }
  return out.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::random_device rd;
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::invalid_argument, "cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(Errc::invalid_argument, "short write to '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, path);
}

}  // namespace relaysleep
