#pragma once

#include <cstdint>
#include <optional>

#include "phcausal/dataset.hpp"
#include "phcausal/rng.hpp"
#include "phcausal/scenario.hpp"

namespace phcausal {

/// Subjects per RNG shard. Shard k of a cohort draws from stream
/// (seed, stream_base + k), so output is independent of worker count.
inline constexpr std::uint64_t kShardSize = 1u << 14;

/// One subject's structural draws before censoring.
struct StructuralDraw {
  double x = 0.0;
  double z = 0.0;
  double u = 0.0;  ///< frontdoor only
  double eta = 0.0;
  double failure_time = 0.0;
};

double backdoor_linear_predictor(const BackdoorCoefficients& c, double x, double z);

/// The frontdoor hazard depends on (Z, U) only; X enters through Z.
double frontdoor_linear_predictor(const FrontdoorCoefficients& c, double z, double u);

/// Draws one subject from the scenario's structural equations. With forced_x,
/// X is set to that value (do-intervention) while its noise is still drawn so
/// the stream stays aligned with the unforced draw.
StructuralDraw draw_structural(const ScenarioConfig& config, RngStream& rng,
                               std::optional<double> forced_x = std::nullopt);

Dataset generate_backdoor(const ScenarioConfig& config);
Dataset generate_frontdoor(const ScenarioConfig& config);
/// Dispatches on config.dag_kind.
Dataset generate(const ScenarioConfig& config);

}  // namespace phcausal
