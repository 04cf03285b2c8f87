#include <benchmark/benchmark.h>

#include "pdo/cutoffs.hpp"
#include "pdo/operators.hpp"
#include "pdo/paradiff.hpp"
#include "pdo/pointwise.hpp"
#include "pdo/symbols.hpp"

using namespace pdo;

static void BM_TransformRoundTrip(benchmark::State& state) {
  TorusGrid g = TorusGrid::make(1, static_cast<int>(state.range(0)));
  GridFunction u = random_band_limited(g, g.M / 2 - 1, 42);
  for (auto _ : state) {
    GridFunction v = inverse(transform(u));
    benchmark::DoNotOptimize(v.values.data());
  }
}
BENCHMARK(BM_TransformRoundTrip)->Arg(1024)->Arg(4096);

static void BM_QuantizeSampled(benchmark::State& state) {
  TorusGrid g = TorusGrid::make(1, static_cast<int>(state.range(0)));
  Symbol a = ching(0.0, 0, 1, ching_max_jmax(g), g);
  GridFunction u = random_band_limited(g, g.M / 4, 42);
  for (auto _ : state) {
    GridFunction v = quantize(a, u);
    benchmark::DoNotOptimize(v.values.data());
  }
}
BENCHMARK(BM_QuantizeSampled)->Arg(512)->Arg(1024);

static void BM_OperatorNormPowerIteration(benchmark::State& state) {
  TorusGrid g = TorusGrid::make(1, 512);
  int J = static_cast<int>(state.range(0));
  Symbol a = ching(0.0, 0, 1, J, g);
  int B = 5 * (1 << J) / 4;
  OperatorMatrix m = operator_matrix(a, EtaBand{-B, B}, EtaBand{-B - (1 << J), B});
  for (auto _ : state) {
    NormEstimate ne = operator_norm(m, 0.0, 0.0);
    benchmark::DoNotOptimize(ne.value);
  }
}
BENCHMARK(BM_OperatorNormPowerIteration)->Arg(5)->Arg(7);

static void BM_MaximalFunction(benchmark::State& state) {
  TorusGrid g = TorusGrid::make(1, static_cast<int>(state.range(0)));
  GridFunction u = random_band_limited(g, g.M / 4, 7);
  for (auto _ : state) {
    MaximalFunction m = maximal(u, 2.0, g.M / 4.0);
    benchmark::DoNotOptimize(m.values.data());
  }
}
BENCHMARK(BM_MaximalFunction)->Arg(512)->Arg(1024);

static void BM_SplitSymbols(benchmark::State& state) {
  TorusGrid g = TorusGrid::make(1, static_cast<int>(state.range(0)));
  Symbol a = ching(0.0, 0, 1, ching_max_jmax(g), g);
  RadialCutoff psi = make_modulation();
  for (auto _ : state) {
    SplitSymbols s = split_symbols(a, psi, 3);
    benchmark::DoNotOptimize(s.a1.values().data());
  }
}
BENCHMARK(BM_SplitSymbols)->Arg(512)->Arg(1024);

BENCHMARK_MAIN();
