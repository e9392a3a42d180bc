#pragma once

#include <cstddef>

#include "phcausal/coxph.hpp"
#include "phcausal/dataset.hpp"
#include "phcausal/estimate.hpp"

namespace phcausal {

/// Gaussian frontdoor model: eta = beta_x x' + beta_z z, X ~ N(mu_x, sigma_x^2),
/// Z | X = x ~ N(alpha x, sigma_z^2).
struct FrontdoorParams {
  double beta_x = 0.0;  ///< confounded coefficient; enters incidence levels only
  double beta_z = 0.0;
  double alpha = 0.0;
  double mu_x = 0.0;
  double sigma_x = 0.0;
  double sigma_z = 0.0;
};

void validate(const FrontdoorParams& params);

struct FrontdoorFit {
  FrontdoorParams params;
  double alpha_se = 0.0;
  double beta_z_se = 0.0;
  CoxFit cox;  ///< fitted on (x, z)
};

/// OLS of z on x, moments of x, Cox on (x, z). The latent U is never read.
FrontdoorFit fit_frontdoor(const Dataset& dataset, const FitOptions& options = {});
FrontdoorParams estimate_frontdoor_params(const Dataset& dataset);

/// H_0(t) exp(beta_x mu_x) exp(sigma_x^2 beta_x^2/2 + sigma_z^2 beta_z^2/2) exp(beta_z alpha x)
CausalEstimate frontdoor_do_cdf_gaussian(const FrontdoorParams& params, double h0_t, double x);

struct Binning {
  std::size_t x_bins = 50;
  std::size_t z_bins = 50;
};

/// Nonparametric double sum: H_0(t) * sum_z e^{eta_z} P(z | x-bin) * mean_x' e^{eta_x'}.
/// x and z are cut at sample quantiles; each z bin contributes the mean of
/// e^{eta_z} over its members. Throws EmptyStratumError if x_value's bin is empty.
CausalEstimate frontdoor_do_cdf_empirical(const Dataset& dataset, const CoxFit& fit,
                                          double x_value, double t, Binning binning = {});

/// exp(beta_z alpha (x - x0))
double frontdoor_causal_rr(const FrontdoorParams& params, double x, double x0);

/// Delta-method SE of frontdoor_causal_rr, treating alpha and beta_z as independent.
double frontdoor_causal_rr_se(const FrontdoorFit& fit, double x, double x0);

/// Natural indirect effect rate ratio of a measured-confounder mediation
/// analysis with no direct effect and no exposure-mediator interaction.
double mediation_indirect_rr(const FrontdoorParams& params, double x, double x0);

}  // namespace phcausal
