#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relaysleep {

enum class Errc {
  invalid_geometry,
  non_positive_distance,
  zero_rate_link,
  integrand_singularity,
  zero_total_traffic,
  degenerate_powers,
  infeasible_action,
  state_space_budget_exceeded,
  dimension_mismatch,
  schema_invalid,
  unstable_input,
  invalid_argument,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_geometry: return "invalid-geometry";
    case Errc::non_positive_distance: return "non-positive-distance";
    case Errc::zero_rate_link: return "zero-rate-link";
    case Errc::integrand_singularity: return "integrand-singularity";
    case Errc::zero_total_traffic: return "zero-total-traffic";
    case Errc::degenerate_powers: return "degenerate-powers";
    case Errc::infeasible_action: return "infeasible-action";
    case Errc::state_space_budget_exceeded: return "state-space-budget-exceeded";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::schema_invalid: return "schema-invalid";
    case Errc::unstable_input: return "unstable-input";
    case Errc::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace relaysleep
