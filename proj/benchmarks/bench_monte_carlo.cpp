#include <benchmark/benchmark.h>

#include "stoplab/instance.hpp"
#include "stoplab/monte_carlo.hpp"
#include "stoplab/trial.hpp"

namespace {

void BM_MonteCarlo(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::uint64_t trials = 10000;
  stoplab::MonteCarloOptions options;
  options.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stoplab::monte_carlo(stoplab::PayoffParams::classical(), n, trials, 7, options));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
}
BENCHMARK(BM_MonteCarlo)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GenInstance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(stoplab::gen_instance(n, seed++));
}
BENCHMARK(BM_GenInstance)->Arg(10)->Arg(100)->Arg(500);

void BM_RunTrial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto instance = stoplab::gen_instance(n, 3);
  stoplab::ThresholdPolicy policy(n / 3 + 1);
  for (auto _ : state) benchmark::DoNotOptimize(stoplab::run_trial(instance, policy));
}
BENCHMARK(BM_RunTrial)->Arg(10)->Arg(100)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
