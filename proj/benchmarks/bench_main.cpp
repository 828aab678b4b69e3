#include <benchmark/benchmark.h>

#include <cmath>

#include "pcmlead/leader.hpp"
#include "pcmlead/montecarlo.hpp"
#include "pcmlead/tie_projection.hpp"

using namespace pcmlead;

namespace {

AdditivePcm sample(int n, int id = 0) {
  ExperimentConfig c = ExperimentConfig::desk_scale();
  return to_additive(trial_matrix(c, n, id, 3.0));
}

void BM_GramSchmidt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  TieBasis b = build_tie_basis(n);
  for (auto _ : state) benchmark::DoNotOptimize(gram_schmidt(b));
}
BENCHMARK(BM_GramSchmidt)->DenseRange(5, 9)->Arg(16)->Arg(32);

void BM_EqBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto h = orthogonal_tie_basis(n);
  AdditivePcm a = sample(n);
  for (auto _ : state) benchmark::DoNotOptimize(eq(a, 1, n - 1, *h));
}
BENCHMARK(BM_EqBasis)->DenseRange(5, 9)->Arg(16)->Arg(32);

void BM_ClosedForm(benchmark::State& state) {
  AdditivePcm a = sample(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_projection(a));
}
BENCHMARK(BM_ClosedForm)->DenseRange(5, 9)->Arg(16)->Arg(32);

void BM_Promote(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto alg = state.range(1) ? Algorithm::bubble : Algorithm::greedy;
  auto h = orthogonal_tie_basis(n);
  AdditivePcm a = sample(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(promote(alg, a, n - 1, *h));
}
BENCHMARK(BM_Promote)->ArgsProduct({{5, 9}, {0, 1}});

void BM_ConsistencyIndex(benchmark::State& state) {
  MultiplicativePcm m = to_multiplicative(sample(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(consistency_index(m));
}
BENCHMARK(BM_ConsistencyIndex)->DenseRange(5, 9);

void BM_DeskExperiment(benchmark::State& state) {
  ExperimentConfig c = ExperimentConfig::desk_scale();
  c.profiles_per_n = 10;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c, 1));
}
BENCHMARK(BM_DeskExperiment)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
