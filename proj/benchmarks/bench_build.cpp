#include <benchmark/benchmark.h>

#include "common.hpp"
#include "rasterjoin/april.hpp"
#include "rasterjoin/ri.hpp"

using namespace rasterjoin;

namespace {

void BM_BuildApril(benchmark::State& state) {
  const auto backend = static_cast<FillBackend>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto polys = bench::star_polygons(42, 64, 100.0, 0.5, 2.0);
  const GridConfig g = bench::grid_over(polys, order);
  std::size_t intervals = 0;
  for (auto _ : state) {
    for (const auto& p : polys) {
      AprilApprox a = build_april(p, g, backend);
      intervals += a.a_list.size();
      benchmark::DoNotOptimize(a);
    }
  }
  state.SetItemsProcessed(state.iterations() * polys.size());
}

void BM_BuildRi(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const auto polys = bench::star_polygons(42, 64, 100.0, 0.5, 2.0);
  const GridConfig g = bench::grid_over(polys, order);
  for (auto _ : state) {
    for (const auto& p : polys) {
      RiApprox ri = build_ri(p, g, RiSide::R);
      benchmark::DoNotOptimize(ri);
    }
  }
  state.SetItemsProcessed(state.iterations() * polys.size());
}

}  // namespace

BENCHMARK(BM_BuildApril)
    ->ArgNames({"backend", "order"})
    ->Args({0, 10})
    ->Args({1, 10})
    ->Args({2, 10})
    ->Args({0, 13})
    ->Args({1, 13})
    ->Args({2, 13})
    ->Args({2, 16})
    ->Unit(benchmark::kMillisecond);

BENCHMARK(BM_BuildRi)->Arg(10)->Arg(13)->Unit(benchmark::kMillisecond);
