#include <benchmark/benchmark.h>

#include "stoplab/candidate_chain.hpp"
#include "stoplab/generic_stopping.hpp"
#include "stoplab/harmonic.hpp"
#include "stoplab/solve_report.hpp"
#include "stoplab/solver.hpp"

namespace {

const stoplab::PayoffParams kParams{1.0, 0.5, 0.25};

void BM_DpSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stoplab::dp_solve(kParams, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DpSolve)->RangeMultiplier(10)->Range(10, 1000000)->Complexity(benchmark::oN);

void BM_Threshold(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stoplab::threshold(kParams, n));
}
BENCHMARK(BM_Threshold)->RangeMultiplier(10)->Range(10, 1000000);

void BM_HarmonicTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stoplab::harmonic_table(n));
}
BENCHMARK(BM_HarmonicTable)->RangeMultiplier(10)->Range(10, 1000000);

void BM_SolveReport(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stoplab::make_solve_report(kParams, n));
}
BENCHMARK(BM_SolveReport)->RangeMultiplier(10)->Range(10, 100000);

void BM_GenericCandidateChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto problem = stoplab::CandidateChain(n).to_problem(kParams);
  for (auto _ : state) benchmark::DoNotOptimize(stoplab::dp_solve_generic(problem));
}
BENCHMARK(BM_GenericCandidateChain)->RangeMultiplier(2)->Range(8, 128);

}  // namespace

BENCHMARK_MAIN();
