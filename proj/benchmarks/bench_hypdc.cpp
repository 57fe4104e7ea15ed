#include <benchmark/benchmark.h>

#include "hypdc/conformal.hpp"
#include "hypdc/mesh.hpp"
#include "hypdc/verifier.hpp"

using namespace hypdc;

static void BM_HypDistance(benchmark::State& state) {
  const DiskPoint p(0.3, -0.2), q(-0.45, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(hyp_distance(p, q));
}
BENCHMARK(BM_HypDistance);

static void BM_Curvature(benchmark::State& state) {
  const Patch p = gen_regular_patch(static_cast<int>(state.range(0)), 0.05);
  const LengthField l = induced_lengths(p.mesh, p.map);
  for (auto _ : state) benchmark::DoNotOptimize(curvature(p.mesh, l));
}
BENCHMARK(BM_Curvature)->Arg(1)->Arg(3)->Arg(6);

static void BM_YamabeSolve(benchmark::State& state) {
  const Patch p = gen_regular_patch(static_cast<int>(state.range(0)), 0.02);
  const LengthField l = induced_lengths(p.mesh, p.map);
  const PinnedValues pinned = pin_boundary(p.mesh, 0.0);
  FactorField init = FactorField::zeros(p.mesh.id_bound());
  for (VertexId v : p.mesh.interior_vertices()) init[v] = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(yamabe_solve(p.mesh, l, pinned, init));
}
BENCHMARK(BM_YamabeSolve)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();

static SampleConfig suite_config(benchmark::State& state) {
  SampleConfig cfg;
  cfg.count = state.range(0);
  cfg.seed = 1;
  cfg.threads = 1;
  return cfg;
}

static void BM_ElementaryChain(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(check_elementary_chain(suite_config(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ElementaryChain)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_AngleLemma(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(check_angle_lemma(suite_config(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AngleLemma)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_MaxPrinciple(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(falsify_max_principle(suite_config(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MaxPrinciple)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
