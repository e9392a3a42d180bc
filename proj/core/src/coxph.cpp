#include "phcausal/coxph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "phcausal/error.hpp"

namespace phcausal {

namespace {

// exp() overflows just above 709.
constexpr double kMaxAbsEta = 700.0;
constexpr double kMonotoneBeta = 50.0;
// A remaining Newton step this large at termination means the optimum is at infinity.
constexpr double kDivergentStep = 0.25;
constexpr int kMaxHalvings = 30;
constexpr int kMaxPolishSteps = 3;

Eigen::VectorXd linear_predictors(const SurvivalDesign& design, const Eigen::VectorXd& beta) {
  if (beta.size() != design.covariates.cols()) {
    throw InvalidArgument("beta has " + std::to_string(beta.size()) + " entries, design has " +
                          std::to_string(design.covariates.cols()) + " covariates");
  }
  Eigen::VectorXd eta = design.covariates * beta;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (!std::isfinite(eta[i]) || std::abs(eta[i]) > kMaxAbsEta) {
      throw NumericalGuardError(
          "linear predictor overflow (|eta| > 700); rescale the covariates");
    }
  }
  return eta;
}

std::size_t count_events(const SurvivalDesign& design) {
  return static_cast<std::size_t>(std::count(design.event.begin(), design.event.end(), 1));
}

Eigen::VectorXd to_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

StepFunction::StepFunction(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() != values_.size()) {
    throw InvalidArgument("step function: knots and values differ in length");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw InvalidArgument("step function: values must be finite and nonnegative");
    }
    if (i > 0 && (knots_[i] <= knots_[i - 1] || values_[i] < values_[i - 1])) {
      throw InvalidArgument("step function: knots must increase and values must not decrease");
    }
  }
}

double StepFunction::operator()(double t) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) {
    return 0.0;
  }
  return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

Eigen::MatrixXd covariate_matrix(const Dataset& dataset, std::span<const std::string> columns) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(dataset.size()),
                    static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const std::vector<double> col = dataset.column(columns[k]);
    m.col(static_cast<Eigen::Index>(k)) = to_vector(col);
  }
  return m;
}

SurvivalDesign make_design(const Dataset& dataset, std::span<const std::string> columns) {
  std::vector<std::string> names = columns.empty()
                                       ? dataset.covariate_names()
                                       : std::vector<std::string>(columns.begin(), columns.end());
  const Eigen::MatrixXd raw = covariate_matrix(dataset, names);
  const auto& records = dataset.records();
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].time < records[b].time;
  });
  SurvivalDesign d;
  d.names = std::move(names);
  d.time.reserve(order.size());
  d.event.reserve(order.size());
  d.covariates.resize(raw.rows(), raw.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    d.time.push_back(records[order[i]].time);
    d.event.push_back(records[order[i]].event ? 1 : 0);
    d.covariates.row(static_cast<Eigen::Index>(i)) = raw.row(static_cast<Eigen::Index>(order[i]));
  }
  return d;
}

PartialLikelihood neg_log_partial_likelihood(const SurvivalDesign& design,
                                             const Eigen::VectorXd& beta) {
  if (count_events(design) == 0) {
    throw NoEventsError();
  }
  const Eigen::VectorXd eta = linear_predictors(design, beta);
  const double shift = eta.maxCoeff();
  const Eigen::Index p = design.covariates.cols();
  const auto n = static_cast<std::ptrdiff_t>(design.time.size());

  PartialLikelihood out;
  out.gradient = Eigen::VectorXd::Zero(p);
  out.hessian = Eigen::MatrixXd::Zero(p, p);

  // Risk-set sums accumulated from the latest time backwards; weights are
  // exp(eta - shift) so only their ratios are ever used.
  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd event_x_sum(p);

  std::ptrdiff_t i = n - 1;
  while (i >= 0) {
    const double t = design.time[static_cast<std::size_t>(i)];
    double deaths = 0.0;
    double event_eta_sum = 0.0;
    event_x_sum.setZero();
    for (; i >= 0 && design.time[static_cast<std::size_t>(i)] == t; --i) {
      const auto row = design.covariates.row(i);
      const double w = std::exp(eta[i] - shift);
      s0 += w;
      for (Eigen::Index a = 0; a < p; ++a) {
        s1[a] += w * row[a];
        for (Eigen::Index b = 0; b <= a; ++b) {
          s2(a, b) += w * row[a] * row[b];
        }
      }
      if (design.event[static_cast<std::size_t>(i)]) {
        deaths += 1.0;
        event_eta_sum += eta[i];
        event_x_sum += row.transpose();
      }
    }
    if (deaths > 0.0) {
      out.value -= event_eta_sum - deaths * (shift + std::log(s0));
      const Eigen::VectorXd mean = s1 / s0;
      out.gradient -= event_x_sum - deaths * mean;
      for (Eigen::Index a = 0; a < p; ++a) {
        for (Eigen::Index b = 0; b <= a; ++b) {
          out.hessian(a, b) += deaths * (s2(a, b) / s0 - mean[a] * mean[b]);
        }
      }
    }
  }
  out.hessian.triangularView<Eigen::StrictlyUpper>() = out.hessian.transpose();
  return out;
}

PartialLikelihood neg_log_partial_likelihood(const Dataset& dataset,
                                             std::span<const double> beta) {
  return neg_log_partial_likelihood(make_design(dataset), to_vector(beta));
}

StepFunction breslow_baseline(const SurvivalDesign& design, const Eigen::VectorXd& beta) {
  if (count_events(design) == 0) {
    throw NoEventsError();
  }
  const Eigen::VectorXd eta = linear_predictors(design, beta);
  const double shift = eta.maxCoeff();
  std::vector<double> knots;
  std::vector<double> increments;
  double s0 = 0.0;
  auto i = static_cast<std::ptrdiff_t>(design.time.size()) - 1;
  while (i >= 0) {
    const double t = design.time[static_cast<std::size_t>(i)];
    double deaths = 0.0;
    for (; i >= 0 && design.time[static_cast<std::size_t>(i)] == t; --i) {
      s0 += std::exp(eta[i] - shift);
      deaths += design.event[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    }
    if (deaths > 0.0) {
      knots.push_back(t);
      increments.push_back(deaths * std::exp(-shift) / s0);
    }
  }
  std::reverse(knots.begin(), knots.end());
  std::reverse(increments.begin(), increments.end());
  std::partial_sum(increments.begin(), increments.end(), increments.begin());
  return StepFunction(std::move(knots), std::move(increments));
}

StepFunction breslow_baseline(const Dataset& dataset, std::span<const double> beta) {
  return breslow_baseline(make_design(dataset), to_vector(beta));
}

std::size_t CoxFit::index_of(const std::string& name) const {
  auto it = std::find(covariate_names.begin(), covariate_names.end(), name);
  if (it == covariate_names.end()) {
    throw InvalidArgument("covariate '" + name + "' is not in the fit");
  }
  return static_cast<std::size_t>(it - covariate_names.begin());
}

double CoxFit::std_error(std::size_t k) const {
  const auto kk = static_cast<Eigen::Index>(k);
  return std::sqrt(std::max(0.0, covariance(kk, kk)));
}

CoxFit fit_cox(const Dataset& dataset, const FitOptions& options) {
  SurvivalDesign design = make_design(dataset, options.covariates);
  const Eigen::Index p = design.covariates.cols();
  if (p == 0) {
    throw InvalidArgument("fit_cox: no covariates selected");
  }
  const std::size_t events = count_events(design);
  if (events == 0) {
    throw NoEventsError();
  }
  const double n = static_cast<double>(design.time.size());
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto col = design.covariates.col(k);
    const double mean = col.mean();
    if (!((col.array() - mean).square().sum() / n > 0.0)) {
      throw DegenerateCovariate(design.names[static_cast<std::size_t>(k)]);
    }
  }
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(p);
  if (!options.baseline_x0.empty()) {
    if (static_cast<Eigen::Index>(options.baseline_x0.size()) != p) {
      throw InvalidArgument("fit_cox: baseline_x0 has the wrong dimension");
    }
    x0 = to_vector(options.baseline_x0);
    design.covariates.rowwise() -= x0.transpose();
  }

  CoxFit fit;
  fit.covariate_names = design.names;
  fit.n_subjects = design.time.size();
  fit.n_events = events;
  fit.baseline_x0.assign(x0.data(), x0.data() + p);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  PartialLikelihood current = neg_log_partial_likelihood(design, beta);
  fit.objective_trace.push_back(current.value);

  const auto newton_step = [&](const PartialLikelihood& pl) -> Eigen::VectorXd {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(pl.hessian);
    Eigen::VectorXd step = ldlt.solve(pl.gradient);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      throw NumericalGuardError("singular information matrix; covariates may be collinear");
    }
    return step;
  };

  // A relative objective change below tol settles the fit; Newton steps then continue until
  // the score is below tol or the objective can no longer decrease.
  bool stopped = false;
  bool settled = false;
  int polish_steps = 0;
  while (fit.iterations < options.max_iter) {
    if (current.gradient.lpNorm<Eigen::Infinity>() <= options.tol) {
      fit.converged = true;
      stopped = true;
      break;
    }
    const Eigen::VectorXd step = newton_step(current);
    double scale = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    PartialLikelihood trial;
    for (int h = 0; h <= kMaxHalvings; ++h, scale *= 0.5) {
      candidate = beta - scale * step;
      try {
        trial = neg_log_partial_likelihood(design, candidate);
      } catch (const NumericalGuardError&) {
        continue;
      }
      if (trial.value < current.value) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // At the floating-point floor the objective cannot resolve the decrease; take the full
      // step when it keeps the objective within rounding and shrinks the score.
      if (polish_steps < kMaxPolishSteps) {
        try {
          trial = neg_log_partial_likelihood(design, beta - step);
        } catch (const NumericalGuardError&) {
          stopped = true;
          break;
        }
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(current.value);
        if (trial.value <= current.value + slack &&
            trial.gradient.lpNorm<Eigen::Infinity>() < current.gradient.lpNorm<Eigen::Infinity>()) {
          beta -= step;
          current = std::move(trial);
          ++polish_steps;
          continue;
        }
      }
      stopped = true;
      break;
    }
    for (Eigen::Index k = 0; k < p; ++k) {
      if (std::abs(candidate[k]) > kMonotoneBeta) {
        throw MonotoneLikelihoodError(design.names[static_cast<std::size_t>(k)]);
      }
    }
    const double change = std::abs(current.value - trial.value);
    beta = candidate;
    current = std::move(trial);
    fit.objective_trace.push_back(current.value);
    ++fit.iterations;
    if (change <= options.tol * std::abs(current.value)) {
      settled = true;
    }
  }
  if (fit.iterations == options.max_iter && !fit.converged &&
      current.gradient.lpNorm<Eigen::Infinity>() <= options.tol) {
    fit.converged = true;
    stopped = true;
  }
  if (stopped || settled) {
    const Eigen::VectorXd remaining = newton_step(current);
    for (Eigen::Index k = 0; k < p; ++k) {
      if (std::abs(remaining[k]) >= kDivergentStep) {
        throw MonotoneLikelihoodError(design.names[static_cast<std::size_t>(k)]);
      }
    }
  }
  fit.final_score_norm = current.gradient.lpNorm<Eigen::Infinity>();
  fit.beta.assign(beta.data(), beta.data() + p);
  fit.covariance = current.hessian.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.baseline_cumhaz = breslow_baseline(design, beta);
  return fit;
}

double linear_predictor(const CoxFit& fit, std::span<const double> covariates) {
  if (covariates.size() != fit.beta.size()) {
    throw InvalidArgument("linear_predictor: expected " + std::to_string(fit.beta.size()) +
                          " covariates, got " + std::to_string(covariates.size()));
  }
  double eta = 0.0;
  for (std::size_t k = 0; k < covariates.size(); ++k) {
    eta += fit.beta[k] * (covariates[k] - fit.baseline_x0[k]);
  }
  return eta;
}

double predict_cumhaz(const CoxFit& fit, std::span<const double> covariates, double t) {
  if (!(t >= 0.0)) {
    throw InvalidArgument("predict_cumhaz: t must be nonnegative");
  }
  return std::exp(linear_predictor(fit, covariates)) * fit.baseline_cumhaz(t);
}

}  // namespace phcausal
