// Brute-force reference computations used only by tests. Nothing here calls
// into the estimator code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "phcausal/dataset.hpp"

namespace phcausal::testing {

struct Row {
  double time;
  bool event;
  std::vector<double> cov;
};

inline std::vector<Row> rows_of(const Dataset& d) {
  std::vector<Row> out;
  for (const auto& r : d.records()) {
    std::vector<double> c = r.x;
    c.insert(c.end(), r.z.begin(), r.z.end());
    out.push_back({r.time, r.event, c});
  }
  return out;
}

/// O(n^2) Breslow negative log partial likelihood straight from the risk-set definition.
inline double brute_neg_log_pl(const std::vector<Row>& rows, const std::vector<double>& beta) {
  const auto eta = [&](const Row& r) {
    double e = 0.0;
    for (std::size_t k = 0; k < beta.size(); ++k) e += beta[k] * r.cov[k];
    return e;
  };
  double value = 0.0;
  for (const auto& i : rows) {
    if (!i.event) continue;
    double denom = 0.0;
    for (const auto& j : rows) {
      if (j.time >= i.time) denom += std::exp(eta(j));
    }
    value -= eta(i) - std::log(denom);
  }
  return value;
}

/// Breslow cumulative hazard at time t, brute force.
inline double brute_breslow(const std::vector<Row>& rows, const std::vector<double>& beta,
                            double t) {
  std::vector<double> times;
  for (const auto& r : rows) {
    if (r.event && r.time <= t) times.push_back(r.time);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  double h = 0.0;
  for (double s : times) {
    double d = 0.0;
    double denom = 0.0;
    for (const auto& r : rows) {
      if (r.event && r.time == s) d += 1.0;
      if (r.time >= s) {
        double e = 0.0;
        for (std::size_t k = 0; k < beta.size(); ++k) e += beta[k] * r.cov[k];
        denom += std::exp(e);
      }
    }
    h += d / denom;
  }
  return h;
}

using Objective = std::function<double(const std::vector<double>&)>;

inline std::vector<double> central_gradient(const Objective& f, std::vector<double> x,
                                            double h) {
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double orig = x[k];
    x[k] = orig + h;
    const double fp = f(x);
    x[k] = orig - h;
    const double fm = f(x);
    x[k] = orig;
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Hessian by central differences of an analytic gradient.
inline std::vector<std::vector<double>> central_jacobian(
    const std::function<std::vector<double>(const std::vector<double>&)>& grad,
    std::vector<double> x, double h) {
  std::vector<std::vector<double>> jac(x.size(), std::vector<double>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double orig = x[k];
    x[k] = orig + h;
    const auto gp = grad(x);
    x[k] = orig - h;
    const auto gm = grad(x);
    x[k] = orig;
    for (std::size_t r = 0; r < x.size(); ++r) jac[r][k] = (gp[r] - gm[r]) / (2.0 * h);
  }
  return jac;
}

/// Grid search on [lo, hi] followed by golden-section refinement inside the
/// best grid cell.
inline double minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
  double best = lo;
  double best_val = f(lo);
  for (double b = lo + step; b <= hi; b += step) {
    const double v = f(b);
    if (v < best_val) {
      best_val = v;
      best = b;
    }
  }
  double a = best - step;
  double c = best + step;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200 && c - a > 1e-12; ++i) {
    const double x1 = c - phi * (c - a);
    const double x2 = a + phi * (c - a);
    if (f(x1) < f(x2)) {
      c = x2;
    } else {
      a = x1;
    }
  }
  return 0.5 * (a + c);
}

/// Small random survival dataset with ties and censoring, p covariates in x.
inline Dataset random_dataset(std::mt19937_64& gen, std::size_t n, std::size_t p) {
  std::uniform_int_distribution<int> time_dist(1, static_cast<int>(n));
  std::normal_distribution<double> cov_dist(0.0, 1.0);
  std::bernoulli_distribution event_dist(0.7);
  std::vector<SubjectRecord> recs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(p);
    for (auto& v : x) v = cov_dist(gen);
    recs.emplace_back(static_cast<double>(time_dist(gen)), event_dist(gen), x,
                      std::vector<double>{});
  }
  recs[0].event = true;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < p; ++k) names.push_back("x" + std::to_string(k));
  return Dataset(std::move(recs), names, {});
}

}  // namespace phcausal::testing
