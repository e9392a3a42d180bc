#pragma once

#include <span>
#include <string>
#include <vector>

#include "phcausal/coxph.hpp"
#include "phcausal/dataset.hpp"
#include "phcausal/estimate.hpp"

namespace phcausal {

/// Split of a fit's covariates into exposures X and adjustment set Z.
struct CovariateRoles {
  std::vector<std::string> x_names;
  std::vector<std::size_t> x_index;  ///< positions in CoxFit::beta
  std::vector<std::string> z_names;
  std::vector<std::size_t> z_index;
};

/// Every fitted covariate not listed in z_columns is an exposure.
CovariateRoles partition_covariates(const CoxFit& fit, std::span<const std::string> z_columns);

struct BackdoorSummary {
  double a_z = 1.0;              ///< mean of exp(eta_z) over the study-start sample
  double mean_joint_risk = 1.0;  ///< mean of exp(eta_x + eta_z)
  double horizon_t = 0.0;
  double max_cumhaz = 0.0;       ///< largest exp(eta) * H_0(horizon_t) in the sample
  bool rarity_warning = false;   ///< max_cumhaz > kRarityThreshold
  CovariateRoles roles;
};

/// Standardization factor A_Z with P(Z = z) the empirical distribution of the
/// dataset. Throws InvalidArgument for columns unknown to the fit or dataset.
BackdoorSummary compute_az(const Dataset& dataset, const CoxFit& fit,
                           std::span<const std::string> z_columns, double horizon_t);

/// exp(eta_x) restricted to the exposure coefficients.
double exposure_predictor(const CoxFit& fit, const CovariateRoles& roles,
                          std::span<const double> x);

/// Interventional incidence P(T < t | do(X = x)) ~= exp(eta_x) H_0(t) A_Z.
CausalEstimate do_cdf(const CoxFit& fit, const BackdoorSummary& summary,
                      std::span<const double> x, double t);

/// exp(eta_x(x) - eta_x(x0)); the z coefficients never enter.
double causal_rr(const CoxFit& fit, const CovariateRoles& roles, std::span<const double> x,
                 std::span<const double> x0);

/// causal_rr with a delta-method standard error from the fit covariance.
CausalEstimate causal_rr_estimate(const CoxFit& fit, const CovariateRoles& roles,
                                  std::span<const double> x, std::span<const double> x0);

/// Interventional cumulative hazard exp(eta_x) A_Z H_0(t).
double do_cumhaz(const CoxFit& fit, const BackdoorSummary& summary, std::span<const double> x,
                 double t);

/// Increment of do_cumhaz over (t1, t2]; requires t2 > t1.
double do_cumhaz_increment(const CoxFit& fit, const BackdoorSummary& summary,
                           std::span<const double> x, double t1, double t2);

/// Average interventional hazard over (t1, t2]: the increment divided by t2 - t1.
double do_hazard_rate(const CoxFit& fit, const BackdoorSummary& summary,
                      std::span<const double> x, double t1, double t2);

/// Population attributable fraction 1 - exp(eta_x(x0)) A_Z / mean_joint_risk.
/// x0 defaults to the fit's baseline (eta_x = 0).
double paf(const Dataset& dataset, const CoxFit& fit, const BackdoorSummary& summary,
           std::span<const double> x0 = {});

}  // namespace phcausal
