#include <benchmark/benchmark.h>

#include <omp.h>

#include "twosided/bench.hpp"

namespace {

using twosided::CostModel;
using twosided::FigurePreset;
using twosided::SweepOptions;

FigurePreset preset(const char* name, std::size_t trials) {
  FigurePreset p = twosided::figure_preset(name);
  p.spec.trials = trials;
  return p;
}

void BM_Fig6Serial(benchmark::State& state) {
  const FigurePreset p = preset("fig6", static_cast<std::size_t>(state.range(0)));
  SweepOptions opt;
  opt.parallel = false;
  for (auto _ : state) benchmark::DoNotOptimize(twosided::run_preset(p, CostModel::reciprocal(), opt));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(p.axis.size()));
}

void BM_Fig6Parallel(benchmark::State& state) {
  const FigurePreset p = preset("fig6", static_cast<std::size_t>(state.range(0)));
  SweepOptions opt;
  opt.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(twosided::run_preset(p, CostModel::reciprocal(), opt));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(p.axis.size()));
}

void BM_Fig7Serial(benchmark::State& state) {
  const FigurePreset p = preset("fig7", static_cast<std::size_t>(state.range(0)));
  SweepOptions opt;
  opt.parallel = false;
  for (auto _ : state) benchmark::DoNotOptimize(twosided::run_preset(p, CostModel::reciprocal(), opt));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(p.axis.size()));
}

void BM_Fig7Parallel(benchmark::State& state) {
  const FigurePreset p = preset("fig7", static_cast<std::size_t>(state.range(0)));
  SweepOptions opt;
  opt.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(twosided::run_preset(p, CostModel::reciprocal(), opt));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(p.axis.size()));
}

void thread_args(benchmark::internal::Benchmark* b) {
  const int max_threads = omp_get_max_threads();
  for (int t = 1; t <= max_threads; t *= 2) b->Args({500, t});
  if ((max_threads & (max_threads - 1)) != 0) b->Args({500, max_threads});
}

}  // namespace

BENCHMARK(BM_Fig6Serial)->Arg(500)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Fig6Parallel)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Fig7Serial)->Arg(500)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Fig7Parallel)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
