#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phcausal/dataset.hpp"

namespace phcausal {

/// Right-continuous nondecreasing step function, 0 before the first knot.
class StepFunction {
 public:
  StepFunction() = default;
  /// knots strictly increasing, values nonnegative and nondecreasing.
  StepFunction(std::vector<double> knots, std::vector<double> values);

  double operator()(double t) const;

  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }
  bool empty() const noexcept { return knots_.empty(); }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Rows of the named covariates, one per subject, in dataset order.
Eigen::MatrixXd covariate_matrix(const Dataset& dataset, std::span<const std::string> columns);

/// Survival data sorted by ascending time (stable in input order for ties).
struct SurvivalDesign {
  std::vector<double> time;
  std::vector<char> event;
  Eigen::MatrixXd covariates;  ///< n x p
  std::vector<std::string> names;
};

/// Empty `columns` selects every covariate of the dataset.
SurvivalDesign make_design(const Dataset& dataset, std::span<const std::string> columns = {});

struct PartialLikelihood {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Negative log Breslow partial likelihood with analytic gradient and Hessian.
/// Tied event times share one risk set.
PartialLikelihood neg_log_partial_likelihood(const SurvivalDesign& design,
                                             const Eigen::VectorXd& beta);
PartialLikelihood neg_log_partial_likelihood(const Dataset& dataset,
                                             std::span<const double> beta);

/// Breslow cumulative baseline hazard at the given coefficients.
StepFunction breslow_baseline(const SurvivalDesign& design, const Eigen::VectorXd& beta);
StepFunction breslow_baseline(const Dataset& dataset, std::span<const double> beta);

struct FitOptions {
  double tol = 1e-9;
  int max_iter = 50;
  /// Covariates to fit, in order. Empty means every dataset covariate.
  std::vector<std::string> covariates;
  /// Reference covariate values where the linear predictor is 0. Empty means all zero.
  std::vector<double> baseline_x0;
};

struct CoxFit {
  std::vector<double> beta;
  std::vector<std::string> covariate_names;
  StepFunction baseline_cumhaz;
  Eigen::MatrixXd covariance;  ///< inverse observed information
  int iterations = 0;
  double final_score_norm = 0.0;
  bool converged = false;
  std::vector<double> baseline_x0;
  /// Objective after each accepted Newton step, starting at beta = 0.
  std::vector<double> objective_trace;
  std::size_t n_subjects = 0;
  std::size_t n_events = 0;

  /// Position of a covariate in beta; throws InvalidArgument if absent.
  std::size_t index_of(const std::string& name) const;
  double std_error(std::size_t k) const;
};

/// Newton-Raphson from beta = 0 with step halving. Throws DegenerateCovariate,
/// NoEventsError, MonotoneLikelihoodError, NumericalGuardError.
CoxFit fit_cox(const Dataset& dataset, const FitOptions& options = {});

/// beta . (covariates - baseline_x0)
double linear_predictor(const CoxFit& fit, std::span<const double> covariates);

/// exp(eta) * H_0(t)
double predict_cumhaz(const CoxFit& fit, std::span<const double> covariates, double t);

}  // namespace phcausal
