// Serial reference vs OpenMP for the grid, sweep and Monte Carlo drivers.
// Run with OMP_NUM_THREADS / PSSMP_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include "pssmp/classify.hpp"
#include "pssmp/estimates.hpp"
#include "pssmp/simulate.hpp"

using namespace pssmp;

static void BM_region_grid(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const PhiFactory restart = [](double a, double) { return restart_phi(a); };
  for (auto _ : state) benchmark::DoNotOptimize(region_grid(restart, 40, 40, parallel));
}
BENCHMARK(BM_region_grid)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

static void BM_comparability(benchmark::State& state) {
  const double a = 1.5;
  const auto phi = restart_phi(a);
  const ResurrectionKernel k(validate(a, 0.6), phi);
  const Envelope env = Envelope::for_phi(a, phi);
  ComparabilityOptions opt;
  opt.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(verify_comparability(k, env, opt));
}
BENCHMARK(BM_comparability)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

static void BM_endpoint_stats(benchmark::State& state) {
  const auto p = validate(1.2, 0.55);
  const auto phi = trace_phi(1.2, 0.55);
  SimConfig cfg;
  cfg.n_paths = 5000;
  cfg.horizon = 1.0;
  cfg.epsilon = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(endpoint_stats(p, phi, cfg, {1.0}, state.range(0) != 0));
}
BENCHMARK(BM_endpoint_stats)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
