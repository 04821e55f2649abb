#include <benchmark/benchmark.h>

#include "sparsedom/calderon.hpp"
#include "sparsedom/domination.hpp"
#include "sparsedom/harness/corpus.hpp"
#include "sparsedom/localnorms.hpp"
#include "sparsedom/maximal.hpp"
#include "sparsedom/weights.hpp"

using namespace sparsedom;

namespace {

void BM_ApplyC(benchmark::State& state) {
  const Domain d(1, -1, static_cast<int>(state.range(0)));
  const auto c = harness::random_tuple_case(d, static_cast<int>(state.range(1)), 1, 1, 0);
  std::vector<GridFunction> slopes;
  for (std::size_t j = 0; j + 1 < c.slots.size(); ++j) slopes.push_back(c.slots[j][0]);
  const LipschitzData l(slopes);
  for (auto _ : state) benchmark::DoNotOptimize(apply_c(l, c.slots.back()[0]));
  state.SetComplexityN(d.cell_count());
}
BENCHMARK(BM_ApplyC)->ArgsProduct({{8, 10, 12}, {1, 2}})->Unit(benchmark::kMillisecond);

void BM_HlMaximalShifted(benchmark::State& state) {
  const Domain d(1, -1, static_cast<int>(state.range(0)));
  auto rng = harness::make_rng(2, 0);
  const GridFunction f = harness::random_step(d, rng);
  const auto cubes = CubeCollection::shifted(d);
  for (auto _ : state) benchmark::DoNotOptimize(hl_maximal(f, cubes));
}
BENCHMARK(BM_HlMaximalShifted)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

void BM_HlMaximalAllMesh(benchmark::State& state) {
  const Domain d(1, -1, static_cast<int>(state.range(0)));
  auto rng = harness::make_rng(3, 0);
  const GridFunction f = harness::random_step(d, rng);
  const auto cubes = CubeCollection::all_mesh(d);
  for (auto _ : state) benchmark::DoNotOptimize(hl_maximal(f, cubes));
}
BENCHMARK(BM_HlMaximalAllMesh)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_ApConstant(benchmark::State& state) {
  const Domain d(1, -1, static_cast<int>(state.range(0)));
  const Weight w = power_weight(0.5, d);
  const auto cubes = state.range(1) ? CubeCollection::all_mesh(d) : CubeCollection::shifted(d);
  for (auto _ : state) benchmark::DoNotOptimize(ap_constant(w, 2.0, cubes));
}
BENCHMARK(BM_ApConstant)->ArgsProduct({{8, 10, 12}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_OrliczLlogl(benchmark::State& state) {
  const Domain d(1, -1, static_cast<int>(state.range(0)));
  auto rng = harness::make_rng(4, 0);
  const GridFunction f = harness::random_step(d, rng);
  const Cube top = Cube::of_domain(d);
  for (auto _ : state) benchmark::DoNotOptimize(orlicz_llogl(f, top, 1.0));
}
BENCHMARK(BM_OrliczLlogl)->DenseRange(8, 14, 2)->Unit(benchmark::kMicrosecond);

void BM_SparseDominate(benchmark::State& state) {
  const Domain d(1, -1, static_cast<int>(state.range(0)));
  const CalderonOperator t(d, 1);
  const auto c = harness::random_tuple_case(d, 1, 1, 5, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sparse_dominate(t, c.slots, {2.0, 2.0}));
}
BENCHMARK(BM_SparseDominate)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
