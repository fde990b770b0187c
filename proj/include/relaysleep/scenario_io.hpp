#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "relaysleep/scenario.hpp"

namespace relaysleep {

/// Parses a scenario document (JSON, `//` comments allowed). Every problem is
/// reported as Errc::schema_invalid with a JSON-pointer or CSV line locator.
/// `base_dir` resolves a relative "profiles_csv" path.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});

Scenario load_scenario(const std::filesystem::path& path);

/// Reads slot profiles from CSV with header
/// `slot,length_s,bs_arrival,rs_arrival_1..N,rs_harvest_1..N`.
std::vector<SlotInputs> parse_profile_csv(std::string_view text, int rs_count);

/// Canonical JSON form of a scenario (profiles inline, one array per slot).
std::string dump_scenario(const Scenario& scenario);

}  // namespace relaysleep
