#include "phcausal/simulate.hpp"

#include <algorithm>

#include "parallel.hpp"
#include "phcausal/error.hpp"

namespace phcausal {

double backdoor_linear_predictor(const BackdoorCoefficients& c, double x, double z) {
  return c.beta_x * x + c.beta_z * z;
}

double frontdoor_linear_predictor(const FrontdoorCoefficients& c, double z, double u) {
  return c.beta_z * z + c.beta_u * u;
}

StructuralDraw draw_structural(const ScenarioConfig& config, RngStream& rng,
                               std::optional<double> forced_x) {
  StructuralDraw d;
  if (config.dag_kind == DagKind::Backdoor) {
    const auto& c = backdoor_coefficients(config);
    if (const auto* bz = std::get_if<BernoulliZ>(&config.z_dist)) {
      d.z = draw_bernoulli(rng, bz->p);
    } else {
      d.z = draw_normal(rng, {0.0, 1.0});
    }
    const double noise = draw_normal(rng, {0.0, c.sigma_x});
    d.x = forced_x ? *forced_x : c.a_zx * d.z + noise;
    d.eta = backdoor_linear_predictor(c, d.x, d.z);
  } else {
    const auto& c = frontdoor_coefficients(config);
    d.u = draw_normal(rng, {0.0, 1.0});
    const double noise = draw_normal(rng, {0.0, c.sigma_x});
    d.x = forced_x ? *forced_x : c.c_ux * d.u + noise;
    d.z = draw_normal(rng, {c.alpha * d.x, c.sigma_z});
    d.eta = frontdoor_linear_predictor(c, d.z, d.u);
  }
  d.failure_time = inverse_survival_time(draw_uniform(rng), d.eta, config.baseline_hazard);
  return d;
}

namespace {

Dataset generate_cohort(const ScenarioConfig& config) {
  validate(config);
  const std::uint64_t n = config.n_subjects;
  const std::uint64_t shards = (n + kShardSize - 1) / kShardSize;
  const bool frontdoor = config.dag_kind == DagKind::Frontdoor;
  std::vector<SubjectRecord> records(n);
  detail::for_each_shard(shards, [&](std::size_t shard) {
    RngStream rng(config.seed, shard);
    const std::uint64_t begin = shard * kShardSize;
    const std::uint64_t end = std::min(n, begin + kShardSize);
    for (std::uint64_t i = begin; i < end; ++i) {
      const StructuralDraw d = draw_structural(config, rng);
      double censor = config.horizon_t;
      if (config.censor_rate > 0.0) {
        censor = std::min(censor, draw_exponential(rng, config.censor_rate));
      }
      SubjectRecord& r = records[i];
      r.event = d.failure_time <= censor;
      r.time = r.event ? d.failure_time : censor;
      r.x = {d.x};
      r.z = {d.z};
      if (frontdoor) {
        r.set_latent(d.u);
      }
    }
  });
  return Dataset(std::move(records), {"x"}, {"z"}, config);
}

}  // namespace

Dataset generate_backdoor(const ScenarioConfig& config) {
  if (config.dag_kind != DagKind::Backdoor) {
    throw InvalidArgument("generate_backdoor: dag_kind must be Backdoor");
  }
  return generate_cohort(config);
}

Dataset generate_frontdoor(const ScenarioConfig& config) {
  if (config.dag_kind != DagKind::Frontdoor) {
    throw InvalidArgument("generate_frontdoor: dag_kind must be Frontdoor");
  }
  return generate_cohort(config);
}

Dataset generate(const ScenarioConfig& config) {
  return config.dag_kind == DagKind::Backdoor ? generate_backdoor(config)
                                               : generate_frontdoor(config);
}

}  // namespace phcausal
