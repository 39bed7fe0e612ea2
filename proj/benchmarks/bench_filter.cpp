#include <benchmark/benchmark.h>

#include <vector>

#include "common.hpp"
#include "rasterjoin/april.hpp"
#include "rasterjoin/ri.hpp"

using namespace rasterjoin;

namespace {

struct FilterFixture {
  std::vector<AprilApprox> april;
  std::vector<CompressedApril> capril;
  std::vector<RiApprox> ri;

  static const FilterFixture& instance() {
    static FilterFixture f = [] {
      FilterFixture out;
      const auto polys = bench::star_polygons(7, 128, 40.0, 0.8, 3.0);
      const GridConfig g = bench::grid_over(polys, 13);
      for (const auto& p : polys) {
        out.april.push_back(build_april(p, g, FillBackend::OneStep));
        out.capril.push_back(compress(out.april.back()));
        out.ri.push_back(build_ri(p, g, RiSide::R));
      }
      return out;
    }();
    return f;
  }
};

void BM_AprilFilter(benchmark::State& state) {
  const auto& f = FilterFixture::instance();
  std::size_t hits = 0;
  for (auto _ : state) {
    for (std::size_t i = 0; i < f.april.size(); ++i)
      for (std::size_t j = i + 1; j < f.april.size(); ++j)
        hits += intersect_filter(f.april[i], f.april[j]) == Verdict::TrueHit;
  }
  benchmark::DoNotOptimize(hits);
  state.SetItemsProcessed(state.iterations() * f.april.size() * (f.april.size() - 1) / 2);
}

void BM_AprilFilterCompressed(benchmark::State& state) {
  const auto& f = FilterFixture::instance();
  std::size_t hits = 0;
  for (auto _ : state) {
    for (std::size_t i = 0; i < f.capril.size(); ++i)
      for (std::size_t j = i + 1; j < f.capril.size(); ++j)
        hits += intersect_filter(f.capril[i], f.capril[j]) == Verdict::TrueHit;
  }
  benchmark::DoNotOptimize(hits);
  state.SetItemsProcessed(state.iterations() * f.capril.size() * (f.capril.size() - 1) / 2);
}

void BM_RiJoin(benchmark::State& state) {
  const auto& f = FilterFixture::instance();
  std::size_t hits = 0;
  for (auto _ : state) {
    for (std::size_t i = 0; i < f.ri.size(); ++i)
      for (std::size_t j = i + 1; j < f.ri.size(); ++j)
        hits += ri_join(f.ri[i], f.ri[j]) == Verdict::TrueHit;
  }
  benchmark::DoNotOptimize(hits);
  state.SetItemsProcessed(state.iterations() * f.ri.size() * (f.ri.size() - 1) / 2);
}

}  // namespace

BENCHMARK(BM_AprilFilter)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AprilFilterCompressed)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RiJoin)->Unit(benchmark::kMillisecond);
