#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace phcausal {

/// N(mean, sd^2); sd == 0 is a point mass at mean.
struct GaussianSpec {
  double mean = 0.0;
  double sd = 1.0;
};

void validate(const GaussianSpec& spec);

/// E[exp(beta * X)] for X ~ spec, i.e. exp(beta*mean + sd^2*beta^2/2).
double gaussian_exponential_moment(double beta, const GaussianSpec& spec);

struct OlsFit {
  double alpha = 0.0;       ///< slope of z on x
  double intercept = 0.0;
  double sigma_z = 0.0;     ///< residual sd, denominator n - 2
  double alpha_se = 0.0;    ///< sigma_z / sqrt(Sxx)
};

/// Least squares of z on x. Throws DegenerateCovariate when x is constant.
OlsFit ols_fit(std::span<const double> x, std::span<const double> z);

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  ///< denominator n - 1
};

Moments empirical_moments(std::span<const double> sample);

/// Inverse standard normal CDF, Wichura's AS241 (PPND16), |rel err| ~ 1e-16.
double normal_quantile(double p);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(std::size_t n);

/// Integral of f over [a, b] with the given rule.
double integrate(const QuadratureRule& rule, double a, double b,
                 const std::function<double(double)>& f);

}  // namespace phcausal
