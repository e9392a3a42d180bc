#pragma once

#include "phcausal/scenario.hpp"

namespace phcausal::testing {

inline ScenarioConfig backdoor_reference() {
  ScenarioConfig c;
  c.dag_kind = DagKind::Backdoor;
  c.n_subjects = 100000;
  c.seed = 42;
  c.baseline_hazard = ExponentialHazard{0.002};
  c.horizon_t = 10.0;
  c.coefficients = BackdoorCoefficients{0.5, 1.0, 0.3, 0.4};
  return c;
}

inline ScenarioConfig frontdoor_reference() {
  ScenarioConfig c;
  c.dag_kind = DagKind::Frontdoor;
  c.n_subjects = 100000;
  c.seed = 7;
  c.baseline_hazard = ExponentialHazard{0.002};
  c.horizon_t = 10.0;
  c.coefficients = FrontdoorCoefficients{0.8, 0.6, 1.0, 0.5, 0.5, 0.7};
  return c;
}

inline ScenarioConfig null_backdoor(std::uint64_t n, std::uint64_t seed) {
  ScenarioConfig c;
  c.dag_kind = DagKind::Backdoor;
  c.n_subjects = n;
  c.seed = seed;
  c.baseline_hazard = ExponentialHazard{0.001};
  c.horizon_t = 10.0;
  c.coefficients = BackdoorCoefficients{0.5, 1.0, 0.0, 0.0};
  return c;
}

}  // namespace phcausal::testing
