#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "phcausal/error.hpp"
#include "phcausal/stats.hpp"

namespace phcausal {
namespace {

// 200-node Gauss-Legendre integral of e^{beta x} N(x; mu, sd^2). The window is
// mu +/- 10 sd, widened to cover the tilted mass around mu + beta sd^2.
double moment_by_quadrature(double beta, double mu, double sd) {
  if (sd == 0.0) return std::exp(beta * mu);
  static const QuadratureRule rule = gauss_legendre(200);
  const double tilt = beta * sd * sd;
  const double lo = std::min(mu - 10.0 * sd, mu + tilt - 10.0 * sd);
  const double hi = std::max(mu + 10.0 * sd, mu + tilt + 10.0 * sd);
  return integrate(rule, lo, hi, [&](double x) {
    const double z = (x - mu) / sd;
    return std::exp(beta * x) * std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  });
}

TEST(GaussianMoment, ZeroBetaIsOne) {
  EXPECT_EQ(gaussian_exponential_moment(0.0, {3.0, 2.0}), 1.0);
  EXPECT_EQ(gaussian_exponential_moment(0.0, {-1.0, 0.0}), 1.0);
}

TEST(GaussianMoment, StandardNormalMgf) {
  EXPECT_NEAR(gaussian_exponential_moment(1.0, {0.0, 1.0}), 1.648721270700128, 1e-15);
}

TEST(GaussianMoment, MatchesQuadratureAtReferencePoint) {
  // exp(0.67405) = 1.96216803063197; quadrature oracle gives 1.96216803063198
  const double v = gaussian_exponential_moment(1.3, {0.2, 0.7});
  EXPECT_NEAR(v, std::exp(0.67405), 1e-14);
  EXPECT_NEAR(v, 1.96222, 1e-4);
  EXPECT_NEAR(v / moment_by_quadrature(1.3, 0.2, 0.7) - 1.0, 0.0, 1e-10);
}

TEST(GaussianMoment, MatchesQuadratureOnGrid) {
  for (double beta : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    for (double mu : {-1.0, 0.0, 1.0}) {
      for (double sd : {0.0, 0.5, 1.0, 2.0}) {
        const double exact = gaussian_exponential_moment(beta, {mu, sd});
        const double quad = moment_by_quadrature(beta, mu, sd);
        EXPECT_LE(std::abs(exact / quad - 1.0), 1e-10)
            << "beta=" << beta << " mu=" << mu << " sd=" << sd;
      }
    }
  }
}

TEST(GaussianMoment, RejectsNonFinite) {
  EXPECT_THROW(gaussian_exponential_moment(NAN, {0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(gaussian_exponential_moment(1.0, {INFINITY, 1.0}), InvalidArgument);
  EXPECT_THROW(gaussian_exponential_moment(1.0, {0.0, -1.0}), InvalidArgument);
}

TEST(Quadrature, ExactForPolynomials) {
  const QuadratureRule rule = gauss_legendre(5);
  // Exact through degree 9.
  EXPECT_NEAR(integrate(rule, 0.0, 2.0, [](double x) { return std::pow(x, 9); }), 102.4, 1e-11);
  double wsum = 0.0;
  for (double w : gauss_legendre(200).weights) wsum += w;
  EXPECT_NEAR(wsum, 2.0, 1e-13);
}

TEST(Ols, ExactLine) {
  const std::vector<double> x{0, 1, 2};
  const std::vector<double> z{0, 2, 4};
  const OlsFit f = ols_fit(x, z);
  EXPECT_NEAR(f.alpha, 2.0, 1e-15);
  EXPECT_NEAR(f.intercept, 0.0, 1e-15);
  EXPECT_NEAR(f.sigma_z, 0.0, 1e-15);
}

TEST(Ols, ConstantResponse) {
  const std::vector<double> x{0, 1, 2};
  const std::vector<double> z{5, 5, 5};
  const OlsFit f = ols_fit(x, z);
  EXPECT_EQ(f.alpha, 0.0);
  EXPECT_EQ(f.intercept, 5.0);
  EXPECT_EQ(f.sigma_z, 0.0);
}

TEST(Ols, HandSolvedNormalEquations) {
  // Sxx = 2, Sxz = 3 -> slope 1.5, intercept 4/3 - 1.5; residuals (1/6, -1/3, 1/6).
  const std::vector<double> x{0, 1, 2};
  const std::vector<double> z{0, 1, 3};
  const OlsFit f = ols_fit(x, z);
  EXPECT_NEAR(f.alpha, 1.5, 1e-15);
  EXPECT_NEAR(f.intercept, -1.0 / 6.0, 1e-15);
  EXPECT_NEAR(f.sigma_z, std::sqrt(1.0 / 6.0), 1e-15);
}

TEST(Ols, ResidualsOrthogonalToX) {
  std::vector<double> x;
  std::vector<double> z;
  for (int i = 0; i < 500; ++i) {
    const double xi = std::sin(0.37 * i) * 3.0 + 0.01 * i;
    x.push_back(xi);
    z.push_back(0.7 * xi - 2.0 + std::cos(1.3 * i));
  }
  const OlsFit f = ols_fit(x, z);
  double dot = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = z[i] - f.intercept - f.alpha * x[i];
    dot += r * x[i];
    scale += std::abs(z[i] * x[i]);
  }
  EXPECT_LE(std::abs(dot), 1e-9 * scale);
}

TEST(Ols, Errors) {
  const std::vector<double> x{1, 1, 1};
  const std::vector<double> z{0, 1, 2};
  EXPECT_THROW(ols_fit(x, z), DegenerateCovariate);
  const std::vector<double> shorter{1, 2};
  EXPECT_THROW(ols_fit(shorter, z), InvalidArgument);
  EXPECT_THROW(ols_fit(shorter, shorter), InvalidArgument);
}

TEST(Moments, Examples) {
  const std::vector<double> constant{3, 3, 3};
  EXPECT_EQ(empirical_moments(constant).mean, 3.0);
  EXPECT_EQ(empirical_moments(constant).sd, 0.0);
  const std::vector<double> two{0, 2};
  EXPECT_EQ(empirical_moments(two).mean, 1.0);
  EXPECT_NEAR(empirical_moments(two).sd, std::sqrt(2.0), 1e-15);
  const std::vector<double> four{1, 2, 3, 4};
  EXPECT_EQ(empirical_moments(four).mean, 2.5);
  EXPECT_NEAR(empirical_moments(four).sd, 1.2909944487358056, 1e-15);
  const std::vector<double> one{1};
  EXPECT_THROW(empirical_moments(one), InvalidArgument);
}

TEST(NormalQuantile, AgreesWithReferenceValues) {
  // Reference values from scipy.special.ndtri.
  struct Case {
    double p;
    double q;
  };
  const Case cases[] = {{1e-300, -37.0470962993612},   {1e-20, -9.262340089798409},
                        {1e-10, -6.361340902404056},   {0.001, -3.090232306167813},
                        {0.02425, -1.972961051311885}, {0.1, -1.2815515655446004},
                        {0.3, -0.5244005127080409},    {0.5, 0.0},
                        {0.975, 1.959963984540054},    {0.999999, 4.753424308817087}};
  for (const auto& c : cases) {
    EXPECT_NEAR(normal_quantile(c.p), c.q, 1e-13 * std::max(1.0, std::abs(c.q))) << c.p;
  }
  EXPECT_THROW(normal_quantile(0.0), InvalidArgument);
  EXPECT_THROW(normal_quantile(1.0), InvalidArgument);
}

TEST(NormalQuantile, AntisymmetricAndMonotone) {
  double prev = -INFINITY;
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    const double q = normal_quantile(p);
    EXPECT_GT(q, prev);
    EXPECT_NEAR(q, -normal_quantile(1.0 - p), 1e-12);
    prev = q;
  }
}

}  // namespace
}  // namespace phcausal
