#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

namespace phcausal {

enum class DagKind { Backdoor, Frontdoor };

struct ExponentialHazard {
  double rate = 0.001;  ///< lambda_0 per year
};

/// H_0(t) = (t / scale)^shape.
struct WeibullHazard {
  double shape = 1.0;
  double scale = 1.0;
};

using BaselineHazard = std::variant<ExponentialHazard, WeibullHazard>;

/// Z -> X -> T with Z -> T.
struct BackdoorCoefficients {
  double a_zx = 0.0;     ///< effect of Z on X
  double sigma_x = 1.0;  ///< sd of X given Z
  double beta_x = 0.0;   ///< log-hazard effect of X
  double beta_z = 0.0;   ///< log-hazard effect of Z
};

/// U -> X -> Z -> T with U -> T; X has no direct arrow into T.
struct FrontdoorCoefficients {
  double c_ux = 0.0;     ///< effect of U on X
  double sigma_x = 1.0;  ///< sd of X given U
  double alpha = 0.0;    ///< effect of X on the mediator Z
  double sigma_z = 1.0;  ///< sd of Z given X
  double beta_z = 0.0;   ///< log-hazard effect of Z
  double beta_u = 0.0;   ///< log-hazard effect of the hidden U
};

using Coefficients = std::variant<BackdoorCoefficients, FrontdoorCoefficients>;

struct StandardNormalZ {};
struct BernoulliZ {
  double p = 0.5;
};
using ZDistribution = std::variant<StandardNormalZ, BernoulliZ>;

/// Complete structural causal model for one simulated cohort.
struct ScenarioConfig {
  DagKind dag_kind = DagKind::Backdoor;
  std::uint64_t n_subjects = 1;
  std::uint64_t seed = 0;
  BaselineHazard baseline_hazard = ExponentialHazard{};
  double horizon_t = 10.0;   ///< administrative censoring time
  double censor_rate = 0.0;  ///< independent exponential censoring, 0 = none
  Coefficients coefficients = BackdoorCoefficients{};
  ZDistribution z_dist = StandardNormalZ{};  ///< backdoor only
};

/// Throws ValidationError naming the offending field.
void validate(const ScenarioConfig& config);

const BackdoorCoefficients& backdoor_coefficients(const ScenarioConfig& config);
const FrontdoorCoefficients& frontdoor_coefficients(const ScenarioConfig& config);

double baseline_cumhaz(const BaselineHazard& hazard, double t);

/// Solves H_0(T) * exp(eta) = -ln(1 - u) for T.
double inverse_survival_time(double u, double eta, const BaselineHazard& hazard);

/// JSON with the field names of ScenarioConfig. Parsing validates the result;
/// errors are ValidationError naming the field path (e.g. "coefficients.beta_x").
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioConfig& config);

}  // namespace phcausal
