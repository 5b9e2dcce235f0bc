#include <benchmark/benchmark.h>

#include <random>

#include "prefrules/harness.hpp"
#include "prefrules/lrar.hpp"
#include "prefrules/miner.hpp"
#include "prefrules/par.hpp"
#include "prefrules/ranking.hpp"
#include "synthetic.hpp"

using namespace prefrules;

namespace {

Dataset prototypes(std::size_t n) { return synth::prototype_table(n, 6, 4, 8, 3, 4, 0.8, 42).dataset(); }

void BM_KendallTau(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const Ranking p(synth::random_permutation(k, rng));
  const Ranking q(synth::random_permutation(k, rng));
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(p, q));
}
BENCHMARK(BM_KendallTau)->Arg(5)->Arg(10)->Arg(50);

void BM_EnumerateFrequent(benchmark::State& state) {
  const auto ds = prototypes(static_cast<std::size_t>(state.range(0)));
  const auto index = ItemIndex::from_descriptors(ds);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_frequent(index, 0.01, {}, static_cast<int>(state.range(1))));
}
BENCHMARK(BM_EnumerateFrequent)->Args({1000, 1})->Args({5000, 1})->Args({5000, 4})->Unit(benchmark::kMillisecond);

void BM_MineLrar(benchmark::State& state) {
  const auto ds = prototypes(static_cast<std::size_t>(state.range(0)));
  LrarParams p;
  p.theta = 0.5;
  p.jobs = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(mine_lrar(ds, p));
}
BENCHMARK(BM_MineLrar)->Args({500, 1})->Args({2000, 1})->Args({2000, 4})->Unit(benchmark::kMillisecond);

void BM_MinePar(benchmark::State& state) {
  const auto ds = prototypes(static_cast<std::size_t>(state.range(0)));
  ParParams p;
  p.minsup = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(mine_par(ds, p));
}
BENCHMARK(BM_MinePar)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const auto ds = prototypes(2000);
  const auto model = mine_lrar(ds, {});
  std::size_t row = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(model, ds.descriptor(row)));
    row = (row + 1) % ds.size();
  }
  state.counters["rules"] = static_cast<double>(model.rules.size());
}
BENCHMARK(BM_Predict);

void BM_EvaluateCv(benchmark::State& state) {
  const auto ds = prototypes(500);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_cv(ds, {}, 10, 1));
}
BENCHMARK(BM_EvaluateCv)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
