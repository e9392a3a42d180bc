#include <benchmark/benchmark.h>

#include "phcausal/backdoor.hpp"
#include "phcausal/coxph.hpp"
#include "phcausal/frontdoor.hpp"
#include "phcausal/simulate.hpp"

namespace {

phcausal::ScenarioConfig backdoor(std::uint64_t n) {
  phcausal::ScenarioConfig c;
  c.dag_kind = phcausal::DagKind::Backdoor;
  c.n_subjects = n;
  c.seed = 42;
  c.baseline_hazard = phcausal::ExponentialHazard{0.002};
  c.horizon_t = 10.0;
  c.coefficients = phcausal::BackdoorCoefficients{0.5, 1.0, 0.3, 0.4};
  return c;
}

void BM_GenerateBackdoor(benchmark::State& state) {
  const auto c = backdoor(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(phcausal::generate(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateBackdoor)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_FitCox(benchmark::State& state) {
  const auto d = phcausal::generate(backdoor(static_cast<std::uint64_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(phcausal::fit_cox(d));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitCox)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PartialLikelihood(benchmark::State& state) {
  const auto d = phcausal::generate(backdoor(static_cast<std::uint64_t>(state.range(0))));
  const auto design = phcausal::make_design(d);
  const Eigen::VectorXd beta = Eigen::Vector2d{0.3, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(phcausal::neg_log_partial_likelihood(design, beta));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PartialLikelihood)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ComputeAz(benchmark::State& state) {
  const auto d = phcausal::generate(backdoor(100000));
  const auto fit = phcausal::fit_cox(d);
  const std::vector<std::string> z{"z"};
  for (auto _ : state) benchmark::DoNotOptimize(phcausal::compute_az(d, fit, z, 10.0));
}
BENCHMARK(BM_ComputeAz)->Unit(benchmark::kMillisecond);

}  // namespace
