// Serial reference vs OpenMP fan-out of the inverse feasibility search.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "tspdual/inverse.hpp"

namespace {

tspdual::InverseConfig config(int restarts) {
  tspdual::InverseConfig cfg;
  cfg.restarts = restarts;
  cfg.local_iters = 500;
  cfg.seed = 7;
  return cfg;
}

void BM_InverseSerial(benchmark::State& state) {
  const auto ybar = tspdual::identity_target(4);
  const auto cfg = config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto rep = tspdual::inverse_search_serial(ybar, cfg);
    benchmark::DoNotOptimize(rep.best_score);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_InverseParallel(benchmark::State& state) {
  const auto ybar = tspdual::identity_target(4);
  const auto cfg = config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto rep = tspdual::inverse_search(ybar, cfg);
    benchmark::DoNotOptimize(rep.best_score);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FeasibilityScore(benchmark::State& state) {
  const auto ybar = tspdual::identity_target(4);
  const auto d = tspdual::random_euclidean_instance(4, 1).d;
  const Eigen::VectorXd lambda = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
  const tspdual::InverseConfig cfg;
  for (auto _ : state) {
    auto s = tspdual::feasibility_score(d, ybar, lambda, cfg);
    benchmark::DoNotOptimize(s.score);
  }
}

}  // namespace

BENCHMARK(BM_InverseSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_InverseParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FeasibilityScore);

BENCHMARK_MAIN();
