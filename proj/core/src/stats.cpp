#include "phcausal/stats.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "phcausal/error.hpp"

namespace phcausal {

void validate(const GaussianSpec& spec) {
  if (!std::isfinite(spec.mean) || !std::isfinite(spec.sd)) {
    throw InvalidArgument("gaussian spec: mean and sd must be finite");
  }
  if (spec.sd < 0.0) {
    throw InvalidArgument("gaussian spec: sd must be nonnegative");
  }
}

double gaussian_exponential_moment(double beta, const GaussianSpec& spec) {
  validate(spec);
  if (!std::isfinite(beta)) {
    throw InvalidArgument("gaussian_exponential_moment: beta must be finite");
  }
  const double var = spec.sd * spec.sd;
  return std::exp(beta * spec.mean + 0.5 * var * beta * beta);
}

OlsFit ols_fit(std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size()) {
    throw InvalidArgument("ols_fit: x and z lengths differ");
  }
  const std::size_t n = x.size();
  if (n < 3) {
    throw InvalidArgument("ols_fit: need at least 3 observations");
  }
  const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double zbar = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  double sxz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - xbar;
    sxx += dx * dx;
    sxz += dx * (z[i] - zbar);
  }
  if (!(sxx > 0.0)) {
    throw DegenerateCovariate("x");
  }
  OlsFit fit;
  fit.alpha = sxz / sxx;
  fit.intercept = zbar - fit.alpha * xbar;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = z[i] - fit.intercept - fit.alpha * x[i];
    ssr += r * r;
  }
  fit.sigma_z = std::sqrt(ssr / static_cast<double>(n - 2));
  fit.alpha_se = fit.sigma_z / std::sqrt(sxx);
  return fit;
}

Moments empirical_moments(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) {
    throw InvalidArgument("empirical_moments: need at least 2 values");
  }
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : sample) {
    ss += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(ss / static_cast<double>(n - 1))};
}

namespace {

// Coefficients of AS241 (Wichura 1988), algorithm PPND16.
constexpr double kA[] = {3.3871328727963666080e0,  1.3314166789178437745e+2,
                         1.9715909503065514427e+3, 1.3731693765509461125e+4,
                         4.5921953931549871457e+4, 6.7265770927008700853e+4,
                         3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr double kB[] = {1.0,
                         4.2313330701600911252e+1, 6.8718700749205790830e+2,
                         5.3941960214247511077e+3, 2.1213794301586595867e+4,
                         3.9307895800092710610e+4, 2.8729085735721942674e+4,
                         5.2264952788528545610e+3};
constexpr double kC[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                         5.76949722146069140550e0, 3.64784832476320460504e0,
                         1.27045825245236838258e0, 2.41780725177450611770e-1,
                         2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kD[] = {1.0,
                         2.05319162663775882187e0, 1.67638483018380384940e0,
                         6.89767334985100004550e-1, 1.48103976427480074590e-1,
                         1.51986665636164571966e-2, 5.47593808499534494600e-4,
                         1.05075007164441684324e-9};
constexpr double kE[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                         1.78482653991729133580e0, 2.96560571828504891230e-1,
                         2.65321895265761230930e-2, 1.24266094738807843860e-3,
                         2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kF[] = {1.0,
                         5.99832206555887937690e-1, 1.36929880922735805310e-1,
                         1.48753612908506148525e-2, 7.86869131145613259100e-4,
                         1.84631831751005468180e-5, 1.42151175831644588870e-7,
                         2.04426310338993978564e-15};

double horner(const double (&c)[8], double r) {
  double acc = c[7];
  for (int k = 6; k >= 0; --k) {
    acc = acc * r + c[k];
  }
  return acc;
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("normal_quantile: p must lie in (0, 1)");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(kA, r) / horner(kB, r);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = horner(kC, r) / horner(kD, r);
  } else {
    r -= 5.0;
    value = horner(kE, r) / horner(kF, r);
  }
  return q < 0.0 ? -value : value;
}

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) {
    throw InvalidArgument("gauss_legendre: need at least one node");
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double integrate(const QuadratureRule& rule, double a, double b,
                 const std::function<double(double)>& f) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

}  // namespace phcausal
