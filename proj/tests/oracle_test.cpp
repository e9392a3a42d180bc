#include <cmath>

#include <gtest/gtest.h>

#include "phcausal/backdoor.hpp"
#include "phcausal/error.hpp"
#include "phcausal/oracle.hpp"
#include "phcausal/simulate.hpp"
#include "support/scenarios.hpp"

namespace phcausal {
namespace {

ScenarioConfig strong_confounding() {
  auto c = testing::backdoor_reference();
  c.coefficients = BackdoorCoefficients{1.0, 1.0, 0.3, 0.8};
  return c;
}

TEST(SimulateDo, NullCoefficientsGiveExponentialIncidence) {
  auto c = testing::null_backdoor(1, 1);
  const OracleResult r = simulate_do(c, 2.0, 200000, 9, 7.0);
  const double p = 1.0 - std::exp(-0.001 * 7.0);
  EXPECT_NEAR(r.incidence, p, 4.0 * r.standard_error);
  EXPECT_EQ(r.n, 200000u);
  EXPECT_EQ(r.x_value, 2.0);
  EXPECT_EQ(r.horizon_t, 7.0);
}

TEST(SimulateDo, Errors) {
  const auto c = testing::backdoor_reference();
  EXPECT_THROW(simulate_do(c, 1.0, 0, 1, 5.0), InvalidArgument);
  EXPECT_THROW(simulate_do(c, 1.0, 10, 1, 10.5), InvalidArgument);
  EXPECT_THROW(simulate_do(c, 1.0, 10, 1, 0.0), InvalidArgument);
  auto bad = c;
  bad.horizon_t = -1.0;
  EXPECT_THROW(simulate_do(bad, 1.0, 10, 1, 5.0), ValidationError);
}

TEST(SimulateDo, StandardErrorIsBinomial) {
  const OracleResult r = simulate_do(testing::backdoor_reference(), 0.5, 50000, 3, 10.0);
  EXPECT_EQ(r.incidence, static_cast<double>(r.events) / 50000.0);
  EXPECT_EQ(r.standard_error, std::sqrt(r.incidence * (1.0 - r.incidence) / 50000.0));
}

TEST(SimulateDo, Deterministic) {
  const auto c = testing::frontdoor_reference();
  const OracleResult a = simulate_do(c, 1.0, 70000, 5, 8.0, 2);
  const OracleResult b = simulate_do(c, 1.0, 70000, 5, 8.0, 2);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.nelson_aalen, b.nelson_aalen);
}

TEST(SimulateDo, MonotoneInTime) {
  const double grid[] = {1.0, 2.5, 5.0, 7.5, 10.0};
  const auto res = simulate_do_grid(testing::backdoor_reference(), 1.0, 100000, 8, grid);
  for (std::size_t k = 1; k < res.size(); ++k) {
    EXPECT_GE(res[k].events, res[k - 1].events);
  }
  EXPECT_EQ(res.back().events, simulate_do(testing::backdoor_reference(), 1.0, 100000, 8, 10.0).events);
}

TEST(SimulateDo, MatchesStandardizedBaseline) {
  const auto config = testing::backdoor_reference();
  const Dataset d = generate(config);
  const CoxFit fit = fit_cox(d);
  const std::vector<std::string> z{"z"};
  const BackdoorSummary s = compute_az(d, fit, z, 10.0);
  const OracleResult r = simulate_do(config, 0.0, 1000000, 42, 10.0);
  EXPECT_NEAR(s.a_z * fit.baseline_cumhaz(10.0) / r.incidence, 1.0, 0.10);
}

TEST(OracleRr, SharedStreamsIdenticalArms) {
  const OracleRatio r = oracle_rr(testing::backdoor_reference(), 0.7, 0.7, 100000, 42, 10.0,
                                  ArmStreams::Shared);
  EXPECT_EQ(r.ratio, 1.0);
}

TEST(OracleRr, BackdoorLog2) {
  auto c = testing::backdoor_reference();
  std::get<BackdoorCoefficients>(c.coefficients).beta_x = std::log(2.0);
  c.baseline_hazard = ExponentialHazard{0.0005};
  const OracleRatio r = oracle_rr(c, 1.0, 0.0, 1000000, 77, 10.0);
  // Rare-disease ratio of 1 - exp(-H) terms sits slightly below 2.
  EXPECT_NEAR(r.ratio, 2.0, std::max(3.0 * r.standard_error, 0.01));
}

TEST(OracleRr, FrontdoorPrediction) {
  auto c = testing::frontdoor_reference();
  c.baseline_hazard = ExponentialHazard{0.0005};
  const OracleRatio r = oracle_rr(c, 1.0, 0.0, 1000000, 78, 10.0);
  EXPECT_NEAR(r.ratio, std::exp(0.5 * 1.0), std::max(3.0 * r.standard_error, 0.01));
}

TEST(OracleRr, NullInterventions) {
  auto b = testing::backdoor_reference();
  std::get<BackdoorCoefficients>(b.coefficients).beta_x = 0.0;
  const OracleRatio rb = oracle_rr(b, 2.0, 0.0, 500000, 1, 10.0);
  EXPECT_NEAR(rb.ratio, 1.0, 3.0 * rb.standard_error);
  auto f = testing::frontdoor_reference();
  std::get<FrontdoorCoefficients>(f.coefficients).alpha = 0.0;
  const OracleRatio rf = oracle_rr(f, 2.0, 0.0, 500000, 2, 10.0);
  EXPECT_NEAR(rf.ratio, 1.0, 3.0 * rf.standard_error);
}

TEST(OracleRr, ZeroEventsIsDegenerate) {
  auto c = testing::null_backdoor(1, 1);
  c.baseline_hazard = ExponentialHazard{1e-9};
  EXPECT_THROW(oracle_rr(c, 1.0, 0.0, 1000, 3, 1.0), DegenerateOracleError);
}

TEST(OracleRr, DeltaMethodStandardError) {
  const OracleRatio r = oracle_rr(testing::backdoor_reference(), 1.0, 0.0, 100000, 5, 10.0);
  const auto& a = r.numerator;
  const auto& b = r.denominator;
  const double rel = std::sqrt((1.0 - a.incidence) / (a.incidence * static_cast<double>(a.n)) +
                               (1.0 - b.incidence) / (b.incidence * static_cast<double>(b.n)));
  EXPECT_NEAR(r.standard_error, r.ratio * rel, 1e-15);
}

TEST(ConditioningVsIntervening, StrongConfoundingSeparates) {
  const auto c = strong_confounding();
  const OracleResult cond = simulate_conditional(c, 1.0, 0.05, 4000000, 11, 10.0);
  const OracleResult doit = simulate_do(c, 1.0, 1000000, 12, 10.0);
  const double se = std::hypot(cond.standard_error, doit.standard_error);
  EXPECT_GT(cond.incidence - doit.incidence, 4.0 * se);
}

TEST(OraclePafTest, NoExposureEffectIsZero) {
  auto c = testing::backdoor_reference();
  std::get<BackdoorCoefficients>(c.coefficients).beta_x = 0.0;
  const OraclePaf p = oracle_paf(c, 0.0, 500000, 4, 10.0);
  EXPECT_NEAR(p.paf, 0.0, 3.0 * p.standard_error);
}

TEST(Taylor, Values) {
  EXPECT_EQ(taylor_relative_error(0.0), 0.0);
  EXPECT_NEAR(taylor_relative_error(0.05), 0.0252083246532945, 1e-15);
  EXPECT_LE(taylor_relative_error(0.05), 0.026);
  EXPECT_NEAR(taylor_relative_error(0.1), 0.05083319447750502, 1e-15);
  EXPECT_GT(taylor_relative_error(0.1), kTaylorReportThreshold);
}

TEST(Taylor, BoundHoldsOnGrid) {
  for (double h = 1e-12; h < 20.0; h *= 1.05) {
    EXPECT_LE(taylor_relative_error(h), taylor_error_bound(h)) << h;
    EXPECT_GE(taylor_relative_error(h), 0.0);
  }
}

TEST(Taylor, SmallHIsContinuous) {
  // The series branch and the direct formula must agree where they meet.
  const double below = taylor_relative_error(std::nextafter(1e-3, 0.0));
  const double at = taylor_relative_error(1e-3);
  EXPECT_NEAR(below / at, 1.0, 1e-12);
  EXPECT_NEAR(taylor_relative_error(1e-8), 5e-9, 1e-17);
}

TEST(ApproxErrorReport, Examples) {
  const std::vector<double> zeros(5, 0.0);
  const auto r0 = approx_error_report(zeros);
  EXPECT_EQ(r0.max_relative_error, 0.0);
  EXPECT_EQ(r0.max_cumhaz, 0.0);
  EXPECT_FALSE(r0.exceeds_threshold);

  const std::vector<double> rare{0.01, 0.05, 0.02};
  const auto r1 = approx_error_report(rare);
  EXPECT_EQ(r1.max_cumhaz, 0.05);
  EXPECT_NEAR(r1.mean_cumhaz, 0.08 / 3.0, 1e-16);
  EXPECT_LE(r1.max_relative_error, 0.026);
  EXPECT_FALSE(r1.exceeds_threshold);
  EXPECT_TRUE(r1.bound_holds);

  const std::vector<double> common{0.1};
  EXPECT_TRUE(approx_error_report(common).exceeds_threshold);
}

TEST(ApproxErrorReport, FromFit) {
  const Dataset d = generate(testing::backdoor_reference());
  const CoxFit fit = fit_cox(d);
  const auto r = approx_error_report(fit, d, 10.0);
  EXPECT_EQ(r.n, d.size());
  EXPECT_TRUE(r.bound_holds);
  EXPECT_GT(r.max_cumhaz, r.mean_cumhaz);
  EXPECT_NEAR(r.mean_cumhaz / (0.002 * 10.0 * std::exp(0.5 * (0.3 * 0.3 * 1.25 + 0.4 * 0.4 + 2 * 0.3 * 0.4 * 0.5))),
              1.0, 0.05);
}

}  // namespace
}  // namespace phcausal
