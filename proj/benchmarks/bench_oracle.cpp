#include <benchmark/benchmark.h>

#include "phcausal/frontdoor.hpp"
#include "phcausal/oracle.hpp"
#include "phcausal/simulate.hpp"

namespace {

phcausal::ScenarioConfig frontdoor() {
  phcausal::ScenarioConfig c;
  c.dag_kind = phcausal::DagKind::Frontdoor;
  c.n_subjects = 100000;
  c.seed = 7;
  c.baseline_hazard = phcausal::ExponentialHazard{0.002};
  c.horizon_t = 10.0;
  c.coefficients = phcausal::FrontdoorCoefficients{0.8, 0.6, 1.0, 0.5, 0.5, 0.7};
  return c;
}

void BM_SimulateDo(benchmark::State& state) {
  const auto c = frontdoor();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(phcausal::simulate_do(c, 1.0, n, 7, 10.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateDo)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_FrontdoorEmpirical(benchmark::State& state) {
  const auto d = phcausal::generate(frontdoor());
  const auto fit = phcausal::fit_frontdoor(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(phcausal::frontdoor_do_cdf_empirical(d, fit.cox, 0.5, 10.0));
  }
}
BENCHMARK(BM_FrontdoorEmpirical)->Unit(benchmark::kMillisecond);

}  // namespace
