#include <benchmark/benchmark.h>

#include "coverlab/folner.hpp"
#include "coverlab/spectrum.hpp"
#include "coverlab/transfer.hpp"

using namespace coverlab;

namespace {

WeightedGraph k4() {
  return WeightedGraph({1, 1, 1, 1}, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
}

VoltageCover tree_cover() { return build_cover(k4(), GroupAction::free_group(3), {{}, {}, {}, {1}, {2}, {3}}); }

VoltageCover triangle_cover() {
  return build_cover(WeightedGraph({1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}), GroupAction::lattice(1),
                     {{}, {}, {1}});
}

}  // namespace

static void BM_OrbitBallFreeGroup(benchmark::State& state) {
  const auto f2 = GroupAction::free_group(2);
  for (auto _ : state) benchmark::DoNotOptimize(orbit_ball(f2, {}, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_OrbitBallFreeGroup)->Arg(6)->Arg(9);

static void BM_FolnerPlane(benchmark::State& state) {
  const auto z2 = GroupAction::lattice(2);
  for (auto _ : state) benchmark::DoNotOptimize(search_folner(z2, Rational(1, state.range(0))));
}
BENCHMARK(BM_FolnerPlane)->Arg(10)->Arg(40);

static void BM_FolnerFreeGroupSubsets(benchmark::State& state) {
  SearchBudget b;
  b.max_radius = 6;
  b.subset_cap = static_cast<int>(state.range(0));
  const auto f2 = GroupAction::free_group(2);
  for (auto _ : state) benchmark::DoNotOptimize(search_folner(f2, Rational(3, 10), b));
}
BENCHMARK(BM_FolnerFreeGroupSubsets)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_TreeWindow(benchmark::State& state) {
  const auto cover = tree_cover();
  for (auto _ : state)
    benchmark::DoNotOptimize(dirichlet_lambda0(cover, static_cast<int>(state.range(0)), Potential::zero(4), 0));
}
BENCHMARK(BM_TreeWindow)->Arg(5)->Arg(20);

static void BM_GenericWindow(benchmark::State& state) {
  const auto cover = triangle_cover();
  for (auto _ : state)
    benchmark::DoNotOptimize(dirichlet_lambda0(cover, static_cast<int>(state.range(0)), Potential::zero(3), 0));
}
BENCHMARK(BM_GenericWindow)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_TransferTriangle(benchmark::State& state) {
  const auto cover = triangle_cover();
  const Potential V({-0.05, -0.05, -0.05});
  for (auto _ : state) benchmark::DoNotOptimize(transfer_negativity(cover, V, 1.0));
}
BENCHMARK(BM_TransferTriangle)->Unit(benchmark::kMillisecond);

static void BM_StabilityInterval(benchmark::State& state) {
  const WeightedGraph cycle({1, 1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  const Potential V({1, -1, 1, -1});
  for (auto _ : state) benchmark::DoNotOptimize(stability_interval(cycle, V, 1e-6));
}
BENCHMARK(BM_StabilityInterval);

BENCHMARK_MAIN();
