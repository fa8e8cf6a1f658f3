#include <benchmark/benchmark.h>

#include "mmrank/graph.hpp"
#include "mmrank/solver.hpp"
#include "mmrank/spectral.hpp"
#include "mmrank/synth.hpp"

using namespace mmrank;

namespace {

ComparisonDataset pairs(std::size_t n) {
  DesignSpec design;
  design.n = n;
  design.family = GraphFamily::ErdosRenyi;
  design.er_p = 0.2;
  design.comparisons_per_edge = 3;
  return synthesize(design, ModelSpec::bradley_terry(), two_level_scores(n, 0.5), 1);
}

ComparisonDataset rankings(std::size_t n) {
  DesignSpec design;
  design.n = n;
  design.set_size = 5;
  design.observations = 10 * n;
  return synthesize(design, ModelSpec::plackett_luce(), two_level_scores(n, 0.5), 1);
}

void BM_MMStep(benchmark::State& state) {
  const auto d = pairs(static_cast<std::size_t>(state.range(0)));
  const Objective objective(ModelSpec::bradley_terry(), d, GammaPrior{2.0, 1.0});
  Params w(d.n(), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(mm_step(objective, w));
}
BENCHMARK(BM_MMStep)->Arg(50)->Arg(200)->Arg(1000);

void BM_PlackettLuceMMStep(benchmark::State& state) {
  const auto d = rankings(static_cast<std::size_t>(state.range(0)));
  const Objective objective(ModelSpec::plackett_luce(), d, GammaPrior{2.0, 1.0});
  Params w(d.n(), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(mm_step(objective, w));
}
BENCHMARK(BM_PlackettLuceMMStep)->Arg(30)->Arg(300);

void BM_Solve(benchmark::State& state) {
  const auto d = pairs(200);
  const GammaPrior prior{1.01, 0.01};
  SolverConfig config;
  config.algorithm = state.range(0) ? Algorithm::AccMM : Algorithm::MM;
  for (auto _ : state) benchmark::DoNotOptimize(solve(ModelSpec::bradley_terry(), d, prior, config));
}
BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LaplacianSummary(benchmark::State& state) {
  const auto m = cooccurrence_matrix(pairs(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(laplacian_summary(m));
}
BENCHMARK(BM_LaplacianSummary)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_Synthesize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pairs(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Synthesize)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
