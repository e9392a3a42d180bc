#include "phcausal/backdoor.hpp"

#include <algorithm>
#include <cmath>

#include "phcausal/error.hpp"

namespace phcausal {

namespace {

void check_exposure_dim(const CovariateRoles& roles, std::span<const double> x,
                        const char* what) {
  if (roles.x_index.empty()) {
    throw InvalidArgument(std::string(what) + ": the fit has no exposure covariates; "
                                              "causal contrasts over adjustment columns are "
                                              "not supported");
  }
  if (x.size() != roles.x_index.size()) {
    throw InvalidArgument(std::string(what) + ": expected " +
                          std::to_string(roles.x_index.size()) + " exposure values, got " +
                          std::to_string(x.size()));
  }
}

double partial_predictor(const CoxFit& fit, const std::vector<std::size_t>& index,
                         const SubjectRecord& r, const std::vector<std::size_t>& source,
                         const std::vector<char>& from_x) {
  double eta = 0.0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    const std::size_t j = index[k];
    const double v = from_x[k] ? r.x[source[k]] : r.z[source[k]];
    eta += fit.beta[j] * (v - fit.baseline_x0[j]);
  }
  return eta;
}

// Where each fitted covariate lives in a SubjectRecord.
struct ColumnMap {
  std::vector<std::size_t> source;
  std::vector<char> from_x;
};

ColumnMap map_columns(const Dataset& dataset, const CoxFit& fit,
                      const std::vector<std::size_t>& index) {
  ColumnMap m;
  for (std::size_t j : index) {
    const std::string& name = fit.covariate_names[j];
    const auto& xs = dataset.x_names();
    const auto& zs = dataset.z_names();
    if (auto it = std::find(xs.begin(), xs.end(), name); it != xs.end()) {
      m.source.push_back(static_cast<std::size_t>(it - xs.begin()));
      m.from_x.push_back(1);
    } else if (auto jt = std::find(zs.begin(), zs.end(), name); jt != zs.end()) {
      m.source.push_back(static_cast<std::size_t>(jt - zs.begin()));
      m.from_x.push_back(0);
    } else {
      throw InvalidArgument("dataset has no column '" + name + "'");
    }
  }
  return m;
}

}  // namespace

CovariateRoles partition_covariates(const CoxFit& fit, std::span<const std::string> z_columns) {
  CovariateRoles roles;
  for (const auto& z : z_columns) {
    fit.index_of(z);
  }
  for (std::size_t j = 0; j < fit.covariate_names.size(); ++j) {
    const std::string& name = fit.covariate_names[j];
    if (std::find(z_columns.begin(), z_columns.end(), name) != z_columns.end()) {
      roles.z_names.push_back(name);
      roles.z_index.push_back(j);
    } else {
      roles.x_names.push_back(name);
      roles.x_index.push_back(j);
    }
  }
  return roles;
}

BackdoorSummary compute_az(const Dataset& dataset, const CoxFit& fit,
                           std::span<const std::string> z_columns, double horizon_t) {
  if (!(horizon_t >= 0.0)) {
    throw InvalidArgument("compute_az: horizon_t must be nonnegative");
  }
  BackdoorSummary s;
  s.roles = partition_covariates(fit, z_columns);
  s.horizon_t = horizon_t;

  std::vector<std::size_t> all(fit.beta.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  const ColumnMap zmap = map_columns(dataset, fit, s.roles.z_index);
  const ColumnMap fullmap = map_columns(dataset, fit, all);

  const double h0 = fit.baseline_cumhaz(horizon_t);
  double az_sum = 0.0;
  double eta_z_sum = 0.0;
  double joint_sum = 0.0;
  double max_joint = 0.0;
  for (const auto& r : dataset.records()) {
    const double eta_z = partial_predictor(fit, s.roles.z_index, r, zmap.source, zmap.from_x);
    const double eta = partial_predictor(fit, all, r, fullmap.source, fullmap.from_x);
    az_sum += std::exp(eta_z);
    eta_z_sum += eta_z;
    const double joint = std::exp(eta);
    joint_sum += joint;
    max_joint = std::max(max_joint, joint);
  }
  const double n = static_cast<double>(dataset.size());
  s.a_z = az_sum / n;
  s.mean_joint_risk = joint_sum / n;
  s.max_cumhaz = max_joint * h0;
  s.rarity_warning = s.max_cumhaz > kRarityThreshold;
  // Jensen: mean of exp >= exp of mean.
  if (s.a_z < std::exp(eta_z_sum / n) * (1.0 - 1e-12)) {
    throw NumericalGuardError("A_Z fell below exp(mean eta_z); summation is unreliable");
  }
  return s;
}

double exposure_predictor(const CoxFit& fit, const CovariateRoles& roles,
                          std::span<const double> x) {
  check_exposure_dim(roles, x, "exposure_predictor");
  double eta = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const std::size_t j = roles.x_index[k];
    eta += fit.beta[j] * (x[k] - fit.baseline_x0[j]);
  }
  return eta;
}

CausalEstimate do_cdf(const CoxFit& fit, const BackdoorSummary& summary,
                      std::span<const double> x, double t) {
  if (!(t >= 0.0)) {
    throw InvalidArgument("do_cdf: t must be nonnegative");
  }
  CausalEstimate e;
  e.method = "do_cdf";
  e.value = std::exp(exposure_predictor(fit, summary.roles, x)) * fit.baseline_cumhaz(t) *
            summary.a_z;
  e.max_cumhaz = summary.max_cumhaz;
  e.rarity_warning = e.value > kRarityThreshold;
  return e;
}

double causal_rr(const CoxFit& fit, const CovariateRoles& roles, std::span<const double> x,
                 std::span<const double> x0) {
  check_exposure_dim(roles, x, "causal_rr");
  check_exposure_dim(roles, x0, "causal_rr");
  return std::exp(exposure_predictor(fit, roles, x) - exposure_predictor(fit, roles, x0));
}

CausalEstimate causal_rr_estimate(const CoxFit& fit, const CovariateRoles& roles,
                                  std::span<const double> x, std::span<const double> x0) {
  CausalEstimate e;
  e.method = "causal_rr";
  e.value = causal_rr(fit, roles, x, x0);
  double var = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < x.size(); ++b) {
      var += (x[a] - x0[a]) * (x[b] - x0[b]) *
             fit.covariance(static_cast<Eigen::Index>(roles.x_index[a]),
                            static_cast<Eigen::Index>(roles.x_index[b]));
    }
  }
  e.std_err = e.value * std::sqrt(std::max(0.0, var));
  return e;
}

double do_cumhaz(const CoxFit& fit, const BackdoorSummary& summary, std::span<const double> x,
                 double t) {
  if (!(t >= 0.0)) {
    throw InvalidArgument("do_cumhaz: t must be nonnegative");
  }
  return std::exp(exposure_predictor(fit, summary.roles, x)) * summary.a_z *
         fit.baseline_cumhaz(t);
}

double do_cumhaz_increment(const CoxFit& fit, const BackdoorSummary& summary,
                           std::span<const double> x, double t1, double t2) {
  if (!(t2 > t1)) {
    throw InvalidArgument("do_cumhaz_increment: require t2 > t1");
  }
  return do_cumhaz(fit, summary, x, t2) - do_cumhaz(fit, summary, x, t1);
}

double do_hazard_rate(const CoxFit& fit, const BackdoorSummary& summary,
                      std::span<const double> x, double t1, double t2) {
  return do_cumhaz_increment(fit, summary, x, t1, t2) / (t2 - t1);
}

double paf(const Dataset& dataset, const CoxFit& fit, const BackdoorSummary& summary,
           std::span<const double> x0) {
  if (dataset.size() == 0) {
    throw InvalidArgument("paf: empty dataset");
  }
  double eta_x0 = 0.0;
  if (!x0.empty()) {
    eta_x0 = exposure_predictor(fit, summary.roles, x0);
  }
  return 1.0 - std::exp(eta_x0) * summary.a_z / summary.mean_joint_risk;
}

}  // namespace phcausal
