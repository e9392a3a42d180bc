#pragma once

#include <optional>
#include <string>

namespace phcausal {

/// Cumulative hazard (or incidence) above which 1 - exp(-H) ~= H is no longer
/// within 5% relative.
inline constexpr double kRarityThreshold = 0.1;

struct CausalEstimate {
  double value = 0.0;
  std::optional<double> std_err;
  std::string method;
  /// Set when the rare-disease approximation is degraded (value or max
  /// cumulative hazard above kRarityThreshold).
  bool rarity_warning = false;
  double max_cumhaz = 0.0;
};

}  // namespace phcausal
