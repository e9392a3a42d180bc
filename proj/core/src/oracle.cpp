#include "phcausal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "parallel.hpp"
#include "phcausal/error.hpp"
#include "phcausal/simulate.hpp"

namespace phcausal {

namespace {

struct Population {
  std::optional<double> forced_x;
  std::optional<double> window_center;
  double window_half_width = 0.0;
};

struct ShardCounts {
  std::uint64_t accepted = 0;
  std::vector<std::uint64_t> events;
};

std::vector<OracleResult> run_population(const ScenarioConfig& config, const Population& pop,
                                         std::uint64_t n, std::uint64_t seed,
                                         std::span<const double> t_grid, std::uint64_t arm) {
  validate(config);
  if (n == 0) {
    throw InvalidArgument("oracle: n must be positive");
  }
  if (t_grid.empty()) {
    throw InvalidArgument("oracle: need at least one evaluation time");
  }
  for (double t : t_grid) {
    if (!(t > 0.0) || t > config.horizon_t) {
      throw InvalidArgument("oracle: evaluation time must lie in (0, horizon_t]");
    }
  }
  const std::uint64_t shards = (n + kShardSize - 1) / kShardSize;
  const std::uint64_t stream_base = (arm + 1) << 32;
  std::vector<ShardCounts> counts(shards);
  detail::for_each_shard(shards, [&](std::size_t shard) {
    RngStream rng(seed, stream_base + shard);
    ShardCounts& c = counts[shard];
    c.events.assign(t_grid.size(), 0);
    const std::uint64_t begin = shard * kShardSize;
    const std::uint64_t end = std::min(n, begin + kShardSize);
    for (std::uint64_t i = begin; i < end; ++i) {
      const StructuralDraw d = draw_structural(config, rng, pop.forced_x);
      if (pop.window_center && std::abs(d.x - *pop.window_center) > pop.window_half_width) {
        continue;
      }
      ++c.accepted;
      for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (d.failure_time < t_grid[k]) {
          ++c.events[k];
        }
      }
    }
  });

  std::uint64_t accepted = 0;
  std::vector<std::uint64_t> events(t_grid.size(), 0);
  for (const auto& c : counts) {
    accepted += c.accepted;
    for (std::size_t k = 0; k < events.size(); ++k) events[k] += c.events[k];
  }
  std::vector<OracleResult> out;
  out.reserve(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    OracleResult r;
    r.n = accepted;
    r.events = events[k];
    r.horizon_t = t_grid[k];
    r.seed = seed;
    r.x_value = pop.forced_x ? *pop.forced_x : (pop.window_center ? *pop.window_center : NAN);
    if (accepted > 0) {
      const double nn = static_cast<double>(accepted);
      r.incidence = static_cast<double>(events[k]) / nn;
      r.standard_error = std::sqrt(r.incidence * (1.0 - r.incidence) / nn);
      // Nelson-Aalen without censoring before t: the k-th failure sees n - k at risk.
      double na = 0.0;
      for (std::uint64_t j = 0; j < events[k]; ++j) {
        na += 1.0 / static_cast<double>(accepted - j);
      }
      r.nelson_aalen = na;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<OracleResult> simulate_do_grid(const ScenarioConfig& config, double x_value,
                                           std::uint64_t n, std::uint64_t seed,
                                           std::span<const double> t_grid, std::uint64_t arm) {
  if (!std::isfinite(x_value)) {
    throw InvalidArgument("simulate_do: x_value must be finite");
  }
  return run_population(config, {x_value, std::nullopt, 0.0}, n, seed, t_grid, arm);
}

OracleResult simulate_do(const ScenarioConfig& config, double x_value, std::uint64_t n,
                         std::uint64_t seed, double t, std::uint64_t arm) {
  const double grid[] = {t};
  return simulate_do_grid(config, x_value, n, seed, grid, arm).front();
}

OracleResult simulate_factual(const ScenarioConfig& config, std::uint64_t n, std::uint64_t seed,
                              double t, std::uint64_t arm) {
  const double grid[] = {t};
  return run_population(config, {}, n, seed, grid, arm).front();
}

OracleResult simulate_conditional(const ScenarioConfig& config, double x_value,
                                  double half_width, std::uint64_t draws, std::uint64_t seed,
                                  double t, std::uint64_t arm) {
  if (!(half_width > 0.0)) {
    throw InvalidArgument("simulate_conditional: half_width must be positive");
  }
  const double grid[] = {t};
  return run_population(config, {std::nullopt, x_value, half_width}, draws, seed, grid, arm)
      .front();
}

OracleRatio oracle_ratio(const OracleResult& numerator, const OracleResult& denominator) {
  if (denominator.events == 0 || numerator.events == 0) {
    throw DegenerateOracleError("oracle ratio: an arm has zero events before t; increase n or t");
  }
  OracleRatio r;
  r.numerator = numerator;
  r.denominator = denominator;
  const double p1 = numerator.incidence;
  const double p0 = denominator.incidence;
  r.ratio = p1 / p0;
  const double var_log = (1.0 - p1) / (static_cast<double>(numerator.n) * p1) +
                         (1.0 - p0) / (static_cast<double>(denominator.n) * p0);
  r.standard_error = r.ratio * std::sqrt(var_log);
  return r;
}

OracleRatio oracle_rr(const ScenarioConfig& config, double x, double x0, std::uint64_t n,
                      std::uint64_t seed, double t, ArmStreams streams) {
  const std::uint64_t arm_x = 1;
  const std::uint64_t arm_x0 = streams == ArmStreams::Shared ? 1 : 2;
  return oracle_ratio(simulate_do(config, x, n, seed, t, arm_x),
                      simulate_do(config, x0, n, seed, t, arm_x0));
}

OraclePaf oracle_paf(const OracleResult& factual, const OracleResult& intervened) {
  if (factual.events == 0) {
    throw DegenerateOracleError("oracle_paf: factual arm has zero events; increase n or t");
  }
  OraclePaf r;
  r.factual = factual;
  r.intervened = intervened;
  const double f = factual.incidence;
  const double i0 = intervened.incidence;
  r.paf = (f - i0) / f;
  const double vf = factual.standard_error * factual.standard_error;
  const double vi = intervened.standard_error * intervened.standard_error;
  r.standard_error = std::sqrt(vi / (f * f) + (i0 * i0) / (f * f * f * f) * vf);
  return r;
}

OraclePaf oracle_paf(const ScenarioConfig& config, double x0, std::uint64_t n, std::uint64_t seed,
                     double t) {
  return oracle_paf(simulate_factual(config, n, seed, t, 3), simulate_do(config, x0, n, seed, t, 4));
}

double taylor_relative_error(double h) {
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("taylor_relative_error: cumulative hazard must be finite and >= 0");
  }
  if (h == 0.0) {
    return 0.0;
  }
  const double risk = -std::expm1(-h);
  // H - (1 - e^{-H}) cancels badly for small H; use its series there.
  const double gap =
      h < 1e-3 ? h * h * (0.5 - h * (1.0 / 6.0 - h * (1.0 / 24.0 - h / 120.0))) : h - risk;
  return gap / risk;
}

double taylor_error_bound(double h) { return 0.5 * h * (1.0 + h); }

ApproxErrorReport approx_error_report(std::span<const double> cumhaz) {
  ApproxErrorReport r;
  r.n = cumhaz.size();
  double sum = 0.0;
  for (double h : cumhaz) {
    const double rel = taylor_relative_error(h);
    r.max_cumhaz = std::max(r.max_cumhaz, h);
    r.max_relative_error = std::max(r.max_relative_error, rel);
    if (rel > taylor_error_bound(h)) {
      r.bound_holds = false;
    }
    sum += h;
  }
  r.mean_cumhaz = cumhaz.empty() ? 0.0 : sum / static_cast<double>(cumhaz.size());
  r.exceeds_threshold = r.max_relative_error > kTaylorReportThreshold;
  return r;
}

ApproxErrorReport approx_error_report(const CoxFit& fit, const Dataset& dataset, double t) {
  const Eigen::MatrixXd cov = covariate_matrix(dataset, fit.covariate_names);
  std::vector<double> h(dataset.size());
  std::vector<double> row(fit.beta.size());
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = cov(i, static_cast<Eigen::Index>(k));
    h[static_cast<std::size_t>(i)] = predict_cumhaz(fit, row, t);
  }
  return approx_error_report(h);
}

}  // namespace phcausal
