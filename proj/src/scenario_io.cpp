#include "relaysleep/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relaysleep/error.hpp"

namespace relaysleep {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(Errc::schema_invalid, where + ": " + what);
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "/" + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

double number_field(const json& obj, const std::string& path, const char* key) {
  return number(field(obj, path, key), path + "/" + key);
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return number(obj.at(key), path + "/" + key);
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array()) schema_error(path, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "/" + std::to_string(i)));
  return out;
}

// Per-relay profile: either one series shared by every relay, or one series
// per relay ([relay][slot]).
std::vector<std::vector<double>> relay_profile(const json& v, const std::string& path, std::size_t slots,
                                               std::size_t relays) {
  if (!v.is_array() || v.empty()) schema_error(path, "expected a non-empty array");
  std::vector<std::vector<double>> out;
  if (v[0].is_number()) {
    const std::vector<double> shared = number_array(v, path);
    if (shared.size() != slots) {
      schema_error(path, "has " + std::to_string(shared.size()) + " entries, expected " + std::to_string(slots));
    }
    out.assign(relays, shared);
    return out;
  }
  if (v.size() != relays) {
    schema_error(path, "has " + std::to_string(v.size()) + " relay series, expected " + std::to_string(relays));
  }
  for (std::size_t k = 0; k < relays; ++k) {
    const std::string p = path + "/" + std::to_string(k);
    out.push_back(number_array(v[k], p));
    if (out.back().size() != slots) {
      schema_error(p, "has " + std::to_string(out.back().size()) + " entries, expected " + std::to_string(slots));
    }
  }
  return out;
}

PathLoss path_loss(const json& obj, const std::string& path, double default_band) {
  PathLoss pl;
  pl.intercept_db = number_field(obj, path, "intercept_db");
  pl.slope_db = number_field(obj, path, "slope_db");
  pl.interference_w = number_or(obj, path, "interference_w", 0.0);
  pl.reference_bandwidth_hz = number_or(obj, path, "reference_bandwidth_hz", default_band);
  return pl;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<SlotInputs> parse_profile_csv(std::string_view text, int rs_count) {
  const auto n = static_cast<std::size_t>(rs_count);
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) schema_error("profiles_csv line 1", "missing header row");

  std::vector<std::string> expected = {"slot", "length_s", "bs_arrival"};
  for (std::size_t k = 1; k <= n; ++k) expected.push_back("rs_arrival_" + std::to_string(k));
  for (std::size_t k = 1; k <= n; ++k) expected.push_back("rs_harvest_" + std::to_string(k));
  const std::vector<std::string> header = split_csv_line(line);
  for (const std::string& col : expected) {
    if (std::find(header.begin(), header.end(), col) == header.end()) {
      schema_error("profiles_csv line 1", "missing column '" + col + "'");
    }
  }
  auto column = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };

  std::vector<SlotInputs> slots;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv_line(line);
    const std::string where = "profiles_csv line " + std::to_string(line_no);
    if (cells.size() != header.size()) {
      schema_error(where, "has " + std::to_string(cells.size()) + " fields, header has " + std::to_string(header.size()));
    }
    auto value = [&](const std::string& name) {
      const std::string& cell = cells[column(name)];
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
      } catch (const std::exception&) {
        schema_error(where, "field '" + name + "' is not a number: '" + cell + "'");
      }
    };
    SlotInputs slot;
    slot.length_s = value("length_s");
    slot.bs_arrival = value("bs_arrival");
    for (std::size_t k = 1; k <= n; ++k) slot.rs_arrival.push_back(value("rs_arrival_" + std::to_string(k)));
    for (std::size_t k = 1; k <= n; ++k) slot.rs_harvest_w.push_back(value("rs_harvest_" + std::to_string(k)));
    slots.push_back(std::move(slot));
  }
  if (slots.empty()) schema_error("profiles_csv", "no slot rows");
  return slots;
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(Errc::schema_invalid, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("", "top level must be an object");

  Scenario s;
  const json& geo = field(doc, "", "geometry");
  const double R = number_field(geo, "/geometry", "bs_radius_m");
  const double r = number_field(geo, "/geometry", "rs_half_width_m");
  const json& count = field(geo, "/geometry", "rs_count");
  if (!count.is_number_integer()) schema_error("/geometry/rs_count", "expected an integer");
  try {
    s.layout = build_layout(R, r, count.get<int>());
  } catch (const Error& e) {
    schema_error("/geometry", e.what());
  }
  const auto n = static_cast<std::size_t>(s.layout.rs_count);

  const json& power = field(doc, "", "power");
  s.power.bs_static_w = number_field(power, "/power", "bs_static_w");
  s.power.bs_load_slope = number_field(power, "/power", "bs_load_slope");
  s.power.bs_tx_power_w = number_field(power, "/power", "bs_tx_power_w");
  s.power.rs_static_w = number_field(power, "/power", "rs_static_w");
  s.power.rs_load_slope = number_field(power, "/power", "rs_load_slope");
  s.power.rs_tx_power_w = number_field(power, "/power", "rs_tx_power_w");
  s.power.rs_sleep_w = number_field(power, "/power", "rs_sleep_w");

  const json& traffic = field(doc, "", "traffic");
  s.total_bandwidth_hz = number_field(traffic, "/traffic", "total_bandwidth_hz");
  s.service_rate = number_field(traffic, "/traffic", "service_rate_per_s");
  s.rate_requirement_bps = number_field(traffic, "/traffic", "rate_requirement_bps");

  const json& links = field(doc, "", "links");
  s.links.noise_density_dbm_hz = number_field(links, "/links", "noise_density_dbm_hz");
  s.links.direct = path_loss(field(links, "/links", "direct"), "/links/direct", s.total_bandwidth_hz);
  s.links.access = path_loss(field(links, "/links", "access"), "/links/access", s.total_bandwidth_hz);
  s.links.backhaul = path_loss(field(links, "/links", "backhaul"), "/links/backhaul", s.total_bandwidth_hz);
  s.links.bs_tx_power_w = s.power.bs_tx_power_w;
  s.links.rs_tx_power_w = s.power.rs_tx_power_w;

  if (doc.contains("profiles_csv")) {
    const json& p = doc.at("profiles_csv");
    if (!p.is_string()) schema_error("/profiles_csv", "expected a path string");
    std::filesystem::path csv = p.get<std::string>();
    if (csv.is_relative()) csv = base_dir / csv;
    std::ifstream in(csv);
    if (!in) schema_error("/profiles_csv", "cannot open '" + csv.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    s.slots = parse_profile_csv(buf.str(), s.layout.rs_count);
  } else {
    const json& prof = field(doc, "", "profiles");
    const std::vector<double> bs = number_array(field(prof, "/profiles", "bs_arrival_per_s"), "/profiles/bs_arrival_per_s");
    const std::size_t slots = bs.size();
    if (slots == 0) schema_error("/profiles/bs_arrival_per_s", "needs at least one slot");
    const auto rs_arr = relay_profile(field(prof, "/profiles", "rs_arrival_per_s"), "/profiles/rs_arrival_per_s", slots, n);
    const auto rs_harv = relay_profile(field(prof, "/profiles", "rs_harvest_w"), "/profiles/rs_harvest_w", slots, n);
    std::vector<double> lengths;
    const json& len = field(prof, "/profiles", "slot_length_s");
    if (len.is_number()) {
      lengths.assign(slots, number(len, "/profiles/slot_length_s"));
    } else {
      lengths = number_array(len, "/profiles/slot_length_s");
      if (lengths.size() != slots) {
        schema_error("/profiles/slot_length_s", "has " + std::to_string(lengths.size()) + " entries, expected " +
                                                    std::to_string(slots));
      }
    }
    for (std::size_t i = 0; i < slots; ++i) {
      SlotInputs slot;
      slot.length_s = lengths[i];
      slot.bs_arrival = bs[i];
      for (std::size_t k = 0; k < n; ++k) {
        slot.rs_arrival.push_back(rs_arr[k][i]);
        slot.rs_harvest_w.push_back(rs_harv[k][i]);
      }
      s.slots.push_back(std::move(slot));
    }
  }

  const json& battery = field(doc, "", "battery");
  s.battery.capacity_j = number_field(battery, "/battery", "capacity_j");
  s.battery.grid_unit_j = number_field(battery, "/battery", "grid_unit_j");
  s.battery.initial_j = number_or(battery, "/battery", "initial_j", 0.5 * s.battery.capacity_j);

  const json& weights = field(doc, "", "weights");
  s.weights.psi = number_field(weights, "/weights", "psi");
  if (weights.contains("omega")) {
    s.weights.omega = number_array(weights.at("omega"), "/weights/omega");
  } else {
    s.weights = CostWeights::uniform(s.weights.psi, s.slots.size());
  }

  if (doc.contains("solver")) {
    const json& solver = doc.at("solver");
    if (solver.contains("exact_dp_budget")) {
      const json& b = solver.at("exact_dp_budget");
      if (!b.is_number() || b.get<double>() < 1) schema_error("/solver/exact_dp_budget", "expected a positive number");
      s.exact_dp_budget = static_cast<std::uint64_t>(b.get<double>());
    }
  }

  if (doc.contains("policy")) {
    const json& pol = doc.at("policy");
    if (!pol.is_array()) schema_error("/policy", "expected an array of per-slot rows");
    SleepMatrix m;
    for (std::size_t i = 0; i < pol.size(); ++i) m.push_back(number_array(pol[i], "/policy/" + std::to_string(i)));
    s.fixed_policy = std::move(m);
  }

  try {
    s.validate();
  } catch (const Error& e) {
    if (e.code() == Errc::schema_invalid) throw;
    throw Error(Errc::schema_invalid, e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::schema_invalid, "cannot open scenario '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

std::string dump_scenario(const Scenario& s) {
  json doc;
  doc["geometry"] = {{"bs_radius_m", s.layout.bs_radius_m},
                     {"rs_half_width_m", s.layout.rs_half_width_m},
                     {"rs_count", s.layout.rs_count}};
  auto link = [](const PathLoss& pl) {
    return json{{"intercept_db", pl.intercept_db},
                {"slope_db", pl.slope_db},
                {"interference_w", pl.interference_w},
                {"reference_bandwidth_hz", pl.reference_bandwidth_hz}};
  };
  doc["links"] = {{"noise_density_dbm_hz", s.links.noise_density_dbm_hz},
                  {"direct", link(s.links.direct)},
                  {"access", link(s.links.access)},
                  {"backhaul", link(s.links.backhaul)}};
  doc["power"] = {{"bs_static_w", s.power.bs_static_w},     {"bs_load_slope", s.power.bs_load_slope},
                  {"bs_tx_power_w", s.power.bs_tx_power_w}, {"rs_static_w", s.power.rs_static_w},
                  {"rs_load_slope", s.power.rs_load_slope}, {"rs_tx_power_w", s.power.rs_tx_power_w},
                  {"rs_sleep_w", s.power.rs_sleep_w}};
  doc["traffic"] = {{"total_bandwidth_hz", s.total_bandwidth_hz},
                    {"service_rate_per_s", s.service_rate},
                    {"rate_requirement_bps", s.rate_requirement_bps}};

  const std::size_t n = static_cast<std::size_t>(s.layout.rs_count);
  json lengths = json::array(), bs = json::array();
  json rs_arr = json::array(), rs_harv = json::array();
  for (std::size_t k = 0; k < n; ++k) {
    json a = json::array(), h = json::array();
    for (const SlotInputs& slot : s.slots) {
      a.push_back(slot.rs_arrival[k]);
      h.push_back(slot.rs_harvest_w[k]);
    }
    rs_arr.push_back(a);
    rs_harv.push_back(h);
  }
  for (const SlotInputs& slot : s.slots) {
    lengths.push_back(slot.length_s);
    bs.push_back(slot.bs_arrival);
  }
  doc["profiles"] = {{"slot_length_s", lengths},
                     {"bs_arrival_per_s", bs},
                     {"rs_arrival_per_s", rs_arr},
                     {"rs_harvest_w", rs_harv}};
  doc["battery"] = {{"capacity_j", s.battery.capacity_j},
                    {"initial_j", s.battery.initial_j},
                    {"grid_unit_j", s.battery.grid_unit_j}};
  doc["weights"] = {{"psi", s.weights.psi}, {"omega", s.weights.omega}};
  doc["solver"] = {{"exact_dp_budget", s.exact_dp_budget}};
  if (s.fixed_policy) doc["policy"] = *s.fixed_policy;
  return doc.dump(2) + "\n";
}

}  // namespace relaysleep
