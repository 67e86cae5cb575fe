#include <benchmark/benchmark.h>

#include "rcgap/dynamics.hpp"
#include "rcgap/sampler.hpp"
#include "rcgap/spectral.hpp"

using namespace rcgap;

static void BM_SwMatrixDirect(benchmark::State& state) {
  Graph g = generate("grid", int(state.range(0)));
  ModelParams params(0.5, 2);
  for (auto _ : state) {
    WeightedMatrix pm = sw_matrix_direct(g, params);
    benchmark::DoNotOptimize(pm.mat.a.data());
  }
}
BENCHMARK(BM_SwMatrixDirect)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_HbMatrix(benchmark::State& state) {
  Graph g = generate("grid", int(state.range(0)));
  ModelParams params(0.5, 2);
  for (auto _ : state) {
    WeightedMatrix pm = hb_matrix(g, params);
    benchmark::DoNotOptimize(pm.mat.a.data());
  }
}
BENCHMARK(BM_HbMatrix)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_SpectralGapGrid3(benchmark::State& state) {
  Graph g = generate("grid", 3);
  ModelParams params(0.5, 2);
  WeightedMatrix pm = hb_matrix(g, params);
  for (auto _ : state) {
    SpectralReport rep = spectral_gap(pm);
    benchmark::DoNotOptimize(rep.gap);
  }
}
BENCHMARK(BM_SpectralGapGrid3)->Unit(benchmark::kMillisecond);

static void BM_SwSteps(benchmark::State& state) {
  Graph g = generate("grid", int(state.range(0)));
  ModelParams params(0.5, 2);
  ChainState s = initial_state(g, Dynamics::sw);
  Rng rng(1);
  for (auto _ : state) sw_step(g, params, s, rng);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SwSteps)->Arg(16)->Arg(64);

static void BM_HbSteps(benchmark::State& state) {
  Graph g = generate("grid", int(state.range(0)));
  ModelParams params(0.5, 2);
  ChainState s = initial_state(g, Dynamics::hb);
  Rng rng(1);
  for (auto _ : state) hb_step(g, params, s, rng);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HbSteps)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
