#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "phcausal/coxph.hpp"
#include "phcausal/dataset.hpp"
#include "phcausal/scenario.hpp"

namespace phcausal {

/// Empirical latent incidence from a direct simulation of the structural model.
struct OracleResult {
  double incidence = 0.0;
  double standard_error = 0.0;  ///< sqrt(p (1 - p) / n)
  std::uint64_t n = 0;
  std::uint64_t events = 0;
  double x_value = 0.0;
  double horizon_t = 0.0;
  std::uint64_t seed = 0;
  double nelson_aalen = 0.0;  ///< cumulative hazard estimate at horizon_t
};

/// Simulates n subjects with X forced to x_value and counts failures before t.
/// Only administrative censoring at t applies. `arm` selects the RNG stream family.
OracleResult simulate_do(const ScenarioConfig& config, double x_value, std::uint64_t n,
                         std::uint64_t seed, double t, std::uint64_t arm = 0);

/// simulate_do evaluated on several times from one simulated population.
std::vector<OracleResult> simulate_do_grid(const ScenarioConfig& config, double x_value,
                                           std::uint64_t n, std::uint64_t seed,
                                           std::span<const double> t_grid, std::uint64_t arm = 0);

/// Natural-course incidence (X drawn from its own equation).
OracleResult simulate_factual(const ScenarioConfig& config, std::uint64_t n, std::uint64_t seed,
                              double t, std::uint64_t arm = 0);

/// Incidence among natural-course subjects with |X - x_value| <= half_width,
/// an estimate of P(T < t | X = x_value). n counts accepted subjects.
OracleResult simulate_conditional(const ScenarioConfig& config, double x_value,
                                  double half_width, std::uint64_t draws, std::uint64_t seed,
                                  double t, std::uint64_t arm = 0);

enum class ArmStreams { Independent, Shared };

struct OracleRatio {
  double ratio = 1.0;
  double standard_error = 0.0;  ///< delta method on the log ratio
  OracleResult numerator;
  OracleResult denominator;
};

/// Ratio of two oracle incidences. Throws DegenerateOracleError when either
/// arm has no events.
OracleRatio oracle_ratio(const OracleResult& numerator, const OracleResult& denominator);

/// Ratio of interventional incidences do(X = x) / do(X = x0). Independent arms
/// use streams (seed, arm 1) and (seed, arm 2); Shared uses arm 1 for both.
OracleRatio oracle_rr(const ScenarioConfig& config, double x, double x0, std::uint64_t n,
                      std::uint64_t seed, double t, ArmStreams streams = ArmStreams::Independent);

/// Oracle population attributable fraction (I_factual - I_do(x0)) / I_factual.
struct OraclePaf {
  double paf = 0.0;
  double standard_error = 0.0;
  OracleResult factual;
  OracleResult intervened;
};

/// Factual arm on stream 3, intervened arm on stream 4.
OraclePaf oracle_paf(const ScenarioConfig& config, double x0, std::uint64_t n, std::uint64_t seed,
                     double t);
/// The same from two already simulated, independent arms.
OraclePaf oracle_paf(const OracleResult& factual, const OracleResult& intervened);

/// Relative error of H against 1 - exp(-H): (H - (1 - e^{-H})) / (1 - e^{-H}).
double taylor_relative_error(double cumhaz);

/// Documented bound: taylor_relative_error(H) <= H/2 (1 + H).
double taylor_error_bound(double cumhaz);

inline constexpr double kTaylorReportThreshold = 0.05;

struct ApproxErrorReport {
  double max_cumhaz = 0.0;
  double mean_cumhaz = 0.0;
  double max_relative_error = 0.0;
  bool exceeds_threshold = false;  ///< max_relative_error > 5%
  bool bound_holds = true;         ///< every error within taylor_error_bound
  std::size_t n = 0;
};

ApproxErrorReport approx_error_report(std::span<const double> cumhaz);
/// Uses H_i = exp(eta_i) H_0(t) for every subject of the dataset.
ApproxErrorReport approx_error_report(const CoxFit& fit, const Dataset& dataset, double t);

}  // namespace phcausal
