#include <benchmark/benchmark.h>

#include <random>

#include "fracheat/heatkernel.hpp"
#include "fracheat/nonlocal_form.hpp"
#include "fracheat/spectral.hpp"
#include "fracheat/stablemc.hpp"

using namespace fracheat;

static void BM_Assemble(benchmark::State& state) {
  Grid g = build_grid({1, 50.0, int(state.range(0))});
  for (auto _ : state) {
    DiscreteOperator op =
        assemble_form(g, FracParams(0.5, 1), WeightSpec{PowerWeight{1.5}});
    benchmark::DoNotOptimize(op.Q.data());
  }
}
BENCHMARK(BM_Assemble)->Arg(251)->Arg(501)->Arg(1001);

static void BM_Eigensolve(benchmark::State& state) {
  Grid g = build_grid({1, 50.0, int(state.range(0))});
  DiscreteOperator op =
      assemble_form(g, FracParams(0.5, 1), WeightSpec{PowerWeight{1.5}});
  for (auto _ : state) {
    Spectrum sp = solve_spectrum(op, op.size());
    benchmark::DoNotOptimize(sp.lambdas.data());
  }
}
BENCHMARK(BM_Eigensolve)->Arg(251)->Arg(501);

static void BM_KernelSlice(benchmark::State& state) {
  Grid g = build_grid({1, 20.0, int(state.range(0))});
  DiscreteOperator op =
      assemble_form(g, FracParams(0.5, 1), WeightSpec{PowerWeight{1.5}});
  Spectrum sp = solve_spectrum(op, op.size());
  for (auto _ : state) {
    KernelSlice sl = kernel_eval(sp, 0.5);
    benchmark::DoNotOptimize(sl.values.data());
  }
}
BENCHMARK(BM_KernelSlice)->Arg(201)->Arg(401);

static void BM_KanterSample(benchmark::State& state) {
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(kanter_sample(0.25, rng));
}
BENCHMARK(BM_KanterSample);

static void BM_PathStep(benchmark::State& state) {
  for (auto _ : state) {
    StablePath p = sample_stable_path({0, 0}, 1, 1.0, 1e-3, 0.5, 7);
    benchmark::DoNotOptimize(p.x.data());
  }
}
BENCHMARK(BM_PathStep);

BENCHMARK_MAIN();
