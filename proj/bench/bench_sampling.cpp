// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "l1conc/montecarlo.hpp"

using namespace l1conc;

namespace {

SampleSource source_for(int kind) {
  SampleSource s;
  s.S = 50;
  s.n = 10000;
  if (kind == 1) s.kind = SourceKind::Dirichlet;
  if (kind == 2) s.kind = SourceKind::Asymptotic;
  return s;
}

void BM_DrawSerial(benchmark::State& state) {
  const auto source = source_for(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(draw_samples_serial(source, 20000, 1));
  state.SetItemsProcessed(state.iterations() * 20000);
}

void BM_DrawParallel(benchmark::State& state) {
  const auto source = source_for(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(draw_samples_parallel(source, 20000, 1, int(state.range(1))));
  state.SetItemsProcessed(state.iterations() * 20000);
}

std::vector<double> samples() {
  static const auto s = draw_samples_serial(source_for(2), 1 << 20, 2);
  return s;
}

void BM_CountSerial(benchmark::State& state) {
  const auto s = samples();
  for (auto _ : state) benchmark::DoNotOptimize(count_at_least_serial(s, 2.8));
  state.SetItemsProcessed(state.iterations() * std::int64_t(s.size()));
}

void BM_CountParallel(benchmark::State& state) {
  const auto s = samples();
  for (auto _ : state) benchmark::DoNotOptimize(count_at_least_parallel(s, 2.8, int(state.range(0))));
  state.SetItemsProcessed(state.iterations() * std::int64_t(s.size()));
}

}  // namespace

// range(0): 0 multinomial, 1 dirichlet, 2 asymptotic; range(1): workers.
BENCHMARK(BM_DrawSerial)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DrawParallel)->ArgsProduct({{0, 1, 2}, {1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountSerial);
BENCHMARK(BM_CountParallel)->Arg(1)->Arg(2)->Arg(4);

BENCHMARK_MAIN();
