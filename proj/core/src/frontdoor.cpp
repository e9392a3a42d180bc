#include "phcausal/frontdoor.hpp"

#include <algorithm>
#include <cmath>

#include "phcausal/error.hpp"
#include "phcausal/stats.hpp"

namespace phcausal {

namespace {

// Linear-interpolation sample quantiles at k/bins, k = 1..bins-1.
std::vector<double> quantile_edges(std::vector<double> values, std::size_t bins) {
  std::sort(values.begin(), values.end());
  std::vector<double> edges;
  edges.reserve(bins > 0 ? bins - 1 : 0);
  const double last = static_cast<double>(values.size() - 1);
  for (std::size_t k = 1; k < bins; ++k) {
    const double pos = last * static_cast<double>(k) / static_cast<double>(bins);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    edges.push_back(values[lo] + frac * (values[hi] - values[lo]));
  }
  return edges;
}

std::size_t bin_of(const std::vector<double>& edges, double v) {
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) -
                                  edges.begin());
}

// The estimator needs exactly one exposure column and one mediator column.
void require_scalar_columns(const Dataset& dataset) {
  if (dataset.x_names().size() != 1 || dataset.z_names().size() != 1) {
    throw InvalidArgument("frontdoor estimators need exactly one x column and one z column");
  }
}

}  // namespace

void validate(const FrontdoorParams& p) {
  for (double v : {p.beta_x, p.beta_z, p.alpha, p.mu_x, p.sigma_x, p.sigma_z}) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("frontdoor params must be finite");
    }
  }
  if (p.sigma_x < 0.0 || p.sigma_z < 0.0) {
    throw InvalidArgument("frontdoor params: sigma_x and sigma_z must be nonnegative");
  }
}

FrontdoorFit fit_frontdoor(const Dataset& dataset, const FitOptions& options) {
  require_scalar_columns(dataset);
  const std::string& xname = dataset.x_names().front();
  const std::string& zname = dataset.z_names().front();
  const std::vector<double> x = dataset.column(xname);
  const std::vector<double> z = dataset.column(zname);

  const OlsFit ols = ols_fit(x, z);
  const Moments mx = empirical_moments(x);

  FitOptions cox_options = options;
  cox_options.covariates = {xname, zname};
  cox_options.baseline_x0.clear();

  FrontdoorFit out;
  out.cox = fit_cox(dataset, cox_options);
  const std::size_t ix = out.cox.index_of(xname);
  const std::size_t iz = out.cox.index_of(zname);
  out.params = {out.cox.beta[ix], out.cox.beta[iz], ols.alpha, mx.mean, mx.sd, ols.sigma_z};
  out.alpha_se = ols.alpha_se;
  out.beta_z_se = out.cox.std_error(iz);
  return out;
}

FrontdoorParams estimate_frontdoor_params(const Dataset& dataset) {
  return fit_frontdoor(dataset).params;
}

CausalEstimate frontdoor_do_cdf_gaussian(const FrontdoorParams& p, double h0_t, double x) {
  validate(p);
  if (!(h0_t >= 0.0) || !std::isfinite(h0_t)) {
    throw InvalidArgument("frontdoor_do_cdf_gaussian: h0_t must be finite and nonnegative");
  }
  if (!std::isfinite(x)) {
    throw InvalidArgument("frontdoor_do_cdf_gaussian: x must be finite");
  }
  CausalEstimate e;
  e.method = "frontdoor_do_cdf_gaussian";
  e.value = h0_t * std::exp(p.beta_x * p.mu_x) *
            std::exp(p.sigma_x * p.sigma_x * p.beta_x * p.beta_x / 2.0 +
                     p.sigma_z * p.sigma_z * p.beta_z * p.beta_z / 2.0) *
            std::exp(p.beta_z * p.alpha * x);
  e.rarity_warning = e.value > kRarityThreshold;
  return e;
}

CausalEstimate frontdoor_do_cdf_empirical(const Dataset& dataset, const CoxFit& fit,
                                          double x_value, double t, Binning binning) {
  require_scalar_columns(dataset);
  if (binning.x_bins == 0 || binning.z_bins == 0) {
    throw InvalidArgument("frontdoor_do_cdf_empirical: bin counts must be positive");
  }
  if (!(t >= 0.0)) {
    throw InvalidArgument("frontdoor_do_cdf_empirical: t must be nonnegative");
  }
  const std::string& xname = dataset.x_names().front();
  const std::string& zname = dataset.z_names().front();
  const std::size_t ix = fit.index_of(xname);
  const std::size_t iz = fit.index_of(zname);
  if (fit.beta.size() != 2) {
    throw InvalidArgument("frontdoor_do_cdf_empirical: fit must be on (x, z) only");
  }
  const std::vector<double> x = dataset.column(xname);
  const std::vector<double> z = dataset.column(zname);
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if (!(x_value >= *xmin && x_value <= *xmax)) {
    throw InvalidArgument("frontdoor_do_cdf_empirical: x_value lies outside the observed support");
  }

  const auto eta_x = [&](double v) { return fit.beta[ix] * (v - fit.baseline_x0[ix]); };
  const auto eta_z = [&](double v) { return fit.beta[iz] * (v - fit.baseline_x0[iz]); };

  const std::vector<double> x_edges = quantile_edges(x, binning.x_bins);
  const std::vector<double> z_edges = quantile_edges(z, binning.z_bins);
  const std::size_t target = bin_of(x_edges, x_value);

  std::vector<double> z_weight_sum(binning.z_bins, 0.0);
  std::vector<double> z_count(binning.z_bins, 0.0);
  std::vector<double> z_count_in_target(binning.z_bins, 0.0);
  double target_size = 0.0;
  double marginal_sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t zb = bin_of(z_edges, z[i]);
    z_weight_sum[zb] += std::exp(eta_z(z[i]));
    z_count[zb] += 1.0;
    marginal_sum += std::exp(eta_x(x[i]));
    if (bin_of(x_edges, x[i]) == target) {
      z_count_in_target[zb] += 1.0;
      target_size += 1.0;
    }
  }
  if (target_size == 0.0) {
    throw EmptyStratumError(target);
  }
  double conditional = 0.0;
  for (std::size_t b = 0; b < binning.z_bins; ++b) {
    if (z_count_in_target[b] > 0.0) {
      conditional += (z_weight_sum[b] / z_count[b]) * (z_count_in_target[b] / target_size);
    }
  }
  const double marginal = marginal_sum / static_cast<double>(x.size());

  CausalEstimate e;
  e.method = "frontdoor_do_cdf_empirical";
  e.value = fit.baseline_cumhaz(t) * conditional * marginal;
  e.rarity_warning = e.value > kRarityThreshold;
  return e;
}

double frontdoor_causal_rr(const FrontdoorParams& p, double x, double x0) {
  if (!std::isfinite(x) || !std::isfinite(x0) || !std::isfinite(p.beta_z) ||
      !std::isfinite(p.alpha)) {
    throw InvalidArgument("frontdoor_causal_rr: inputs must be finite");
  }
  return std::exp(p.beta_z * p.alpha * (x - x0));
}

double frontdoor_causal_rr_se(const FrontdoorFit& fit, double x, double x0) {
  const auto& p = fit.params;
  const double d = x - x0;
  const double var = d * d *
                     (p.alpha * p.alpha * fit.beta_z_se * fit.beta_z_se +
                      p.beta_z * p.beta_z * fit.alpha_se * fit.alpha_se);
  return frontdoor_causal_rr(p, x, x0) * std::sqrt(var);
}

double mediation_indirect_rr(const FrontdoorParams& p, double x, double x0) {
  if (!std::isfinite(x) || !std::isfinite(x0) || !std::isfinite(p.beta_z) ||
      !std::isfinite(p.alpha)) {
    throw InvalidArgument("mediation_indirect_rr: inputs must be finite");
  }
  // Outcome model: log h = theta1 x + theta2 m + theta3 x m + theta4 c.
  // Mediator model: E[m | x, c] = b0 + b1 x + b2 c.
  // NIE rate ratio = exp((theta2 b1 + theta3 b1 x) (x - x0)); the confounder
  // coefficients theta4 and b2 drop out. Solely indirect: theta1 = theta3 = 0.
  const double theta2 = p.beta_z;
  const double theta3 = 0.0;
  const double b1 = p.alpha;
  return std::exp((theta2 * b1 + theta3 * b1 * x) * (x - x0));
}

}  // namespace phcausal
