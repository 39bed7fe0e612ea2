#include <doctest.h>

#include <stdexcept>

#include <set>

#include "../support/oracle.hpp"
#include "../support/synthetic.hpp"
#include "rasterjoin/pipeline.hpp"

using namespace rasterjoin;

namespace {

Dataset square_dataset(std::initializer_list<std::pair<std::uint32_t, Mbr>> boxes) {
  std::vector<DatasetObject> objects;
  for (const auto& [id, b] : boxes) {
    objects.push_back(DatasetObject{
        id, make_polygon({{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmax, b.ymax},
                          {b.xmin, b.ymax}})});
  }
  return make_dataset(std::move(objects));
}

std::vector<IdPair> brute_mbr_join(const Dataset& r, const Dataset& s, MbrPredicate pred) {
  std::vector<IdPair> out;
  for (const auto& ro : r.objects)
    for (const auto& so : s.objects)
      if (mbr_relate(geometry_mbr(ro.geometry), geometry_mbr(so.geometry), pred))
        out.push_back(IdPair{ro.id, so.id});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("mbr_join closed semantics and oracle equivalence") {
  const Dataset a = square_dataset({{0, Mbr{0, 0, 1, 1}}});
  const Dataset b = square_dataset({{0, Mbr{1, 1, 2, 2}}});
  CHECK(mbr_join(a, b, MbrPredicate::Intersects).size() == 1);  // corner touch

  const Dataset c = square_dataset({{0, Mbr{5, 5, 6, 6}}});
  CHECK(mbr_join(a, c, MbrPredicate::Intersects).empty());

  synthetic::Rng rng(601);
  const Mbr area{0, 0, 100, 100};
  const Dataset r = synthetic::random_polygon_dataset(rng, 500, area, 0.5, 4.0);
  const Dataset s = synthetic::random_polygon_dataset(rng, 500, area, 0.5, 4.0);
  CHECK(mbr_join(r, s, MbrPredicate::Intersects) ==
        brute_mbr_join(r, s, MbrPredicate::Intersects));
  CHECK(mbr_join(r, s, MbrPredicate::Within) == brute_mbr_join(r, s, MbrPredicate::Within));
}

TEST_CASE("partition tiles and membership") {
  const Dataset r = square_dataset({{0, Mbr{1, 1, 9, 2}}, {1, Mbr{2, 6, 3, 7}}});
  const Dataset s = square_dataset({{0, Mbr{6, 6, 7, 7}}});

  const PartitionScheme p1 = partition(r, s, 1);
  CHECK(p1.tiles.size() == 1);
  CHECK(p1.tiles[0].rect == p1.map_mbr);
  CHECK(p1.tiles[0].r_members.size() == 2);

  const PartitionScheme p2 = partition(r, s, 2);
  CHECK(p2.tiles.size() == 4);
  // Object 0 of r spans the x midline: it must appear in both bottom tiles.
  int appearances = 0;
  for (const auto& tile : p2.tiles)
    for (auto idx : tile.r_members)
      if (idx == 0) ++appearances;
  CHECK(appearances == 2);
}

TEST_CASE("run_join equals naive_join across configurations") {
  synthetic::Rng rng(602);
  const Mbr area{0, 0, 60, 60};
  const Dataset r = synthetic::random_polygon_dataset(rng, 60, area, 0.8, 3.0);
  const Dataset s = synthetic::random_polygon_dataset(rng, 60, area, 0.8, 3.5);
  const auto expected = oracle::naive_join(r, s, JoinPredicate::Intersects);

  for (FilterKind filter : {FilterKind::None, FilterKind::Ri, FilterKind::April}) {
    for (int p : {1, 3}) {
      JoinConfig cfg;
      cfg.order = 10;
      cfg.filter = filter;
      cfg.partitions = p;
      const JoinResult res = run_join(r, s, JoinPredicate::Intersects, cfg);
      CHECK(res.pairs == expected);
      CHECK(res.stats.candidates ==
            res.stats.true_hits + res.stats.true_negatives + res.stats.indecisive);
      CHECK(res.stats.results() == res.pairs.size());
      // No duplicates.
      CHECK(std::set<IdPair>(res.pairs.begin(), res.pairs.end()).size() == res.pairs.size());
    }
  }
}

TEST_CASE("filter disabled changes refinement load, not results") {
  synthetic::Rng rng(603);
  const Mbr area{0, 0, 40, 40};
  const Dataset r = synthetic::random_polygon_dataset(rng, 50, area, 0.8, 3.0);
  const Dataset s = synthetic::random_polygon_dataset(rng, 50, area, 0.8, 3.0);
  JoinConfig april_cfg;
  april_cfg.order = 10;
  JoinConfig none_cfg;
  none_cfg.filter = FilterKind::None;
  const JoinResult with_filter = run_join(r, s, JoinPredicate::Intersects, april_cfg);
  const JoinResult without = run_join(r, s, JoinPredicate::Intersects, none_cfg);
  CHECK(with_filter.pairs == without.pairs);
  CHECK(without.stats.indecisive == without.stats.candidates);
  CHECK(with_filter.stats.indecisive < without.stats.indecisive);
}

TEST_CASE("within joins") {
  synthetic::Rng rng(604);
  const Mbr area{0, 0, 50, 50};
  const Dataset small = synthetic::random_polygon_dataset(rng, 80, area, 0.3, 1.0);
  const Dataset big = synthetic::random_polygon_dataset(rng, 40, area, 3.0, 8.0);
  const auto expected = oracle::naive_join(small, big, JoinPredicate::Within);

  for (FilterKind filter : {FilterKind::None, FilterKind::April, FilterKind::Ri}) {
    for (int p : {1, 2}) {
      JoinConfig cfg;
      cfg.order = 10;
      cfg.filter = filter;
      cfg.partitions = p;
      const JoinResult res = run_join(small, big, JoinPredicate::Within, cfg);
      CHECK(res.pairs == expected);
    }
  }
}

TEST_CASE("polygon-linestring joins") {
  synthetic::Rng rng(605);
  const Mbr area{0, 0, 50, 50};
  const Dataset polys = synthetic::random_polygon_dataset(rng, 50, area, 1.0, 4.0);
  const Dataset lines = synthetic::random_linestring_dataset(rng, 80, area, 6, 5.0);
  const auto expected = oracle::naive_join(polys, lines, JoinPredicate::PolyLine);

  for (FilterKind filter : {FilterKind::None, FilterKind::April}) {
    for (bool compressed : {false, true}) {
      if (filter == FilterKind::None && compressed) continue;
      JoinConfig cfg;
      cfg.order = 10;
      cfg.filter = filter;
      cfg.compressed = compressed;
      cfg.partitions = 2;
      const JoinResult res = run_join(polys, lines, JoinPredicate::PolyLine, cfg);
      CHECK(res.pairs == expected);
    }
  }

  JoinConfig bad;
  bad.filter = FilterKind::Ri;
  CHECK_THROWS_AS(run_join(polys, lines, JoinPredicate::PolyLine, bad),
                  std::invalid_argument);
}

TEST_CASE("partitioned joins equal the single-tile baseline") {
  synthetic::Rng rng(606);
  const Mbr area{0, 0, 80, 80};
  const Dataset r = synthetic::random_polygon_dataset(rng, 70, area, 0.8, 4.0);
  const Dataset s = synthetic::random_polygon_dataset(rng, 70, area, 0.8, 4.0);
  JoinConfig cfg;
  cfg.order = 10;
  const JoinResult base = run_join(r, s, JoinPredicate::Intersects, cfg);
  for (int p : {2, 3, 4}) {
    cfg.partitions = p;
    const JoinResult res = run_join(r, s, JoinPredicate::Intersects, cfg);
    CHECK(res.pairs == base.pairs);
    CHECK(std::set<IdPair>(res.pairs.begin(), res.pairs.end()).size() == res.pairs.size());
  }
}

TEST_CASE("threaded execution matches sequential") {
  synthetic::Rng rng(607);
  const Mbr area{0, 0, 60, 60};
  const Dataset r = synthetic::random_polygon_dataset(rng, 60, area, 0.8, 3.0);
  const Dataset s = synthetic::random_polygon_dataset(rng, 60, area, 0.8, 3.0);
  JoinConfig cfg;
  cfg.order = 10;
  cfg.partitions = 4;
  const JoinResult seq = run_join(r, s, JoinPredicate::Intersects, cfg);
  cfg.threads = 4;
  const JoinResult par = run_join(r, s, JoinPredicate::Intersects, cfg);
  CHECK(seq.pairs == par.pairs);
  CHECK(seq.stats.candidates == par.stats.candidates);
}

TEST_CASE("run_selection") {
  synthetic::Rng rng(608);
  const Mbr area{0, 0, 50, 50};
  const Dataset data = synthetic::random_polygon_dataset(rng, 120, area, 0.5, 3.0);
  JoinConfig cfg;
  cfg.order = 10;

  SUBCASE("query equal to a dataset polygon finds it") {
    const auto& poly = std::get<SimplePolygon>(data.objects[17].geometry);
    const SelectionResult res = run_selection(poly, data, cfg);
    CHECK(std::find(res.ids.begin(), res.ids.end(), data.objects[17].id) != res.ids.end());
  }
  SUBCASE("disjoint query yields empty result") {
    const SimplePolygon far = make_polygon({{500, 500}, {501, 500}, {501, 501}, {500, 501}});
    CHECK(run_selection(far, data, cfg).ids.empty());
  }
  SUBCASE("results equal brute force selection for every filter") {
    for (int i = 0; i < 25; ++i) {
      // Queries stay inside the dataset MBR, which defines the grid extent.
      const SimplePolygon q = synthetic::random_polygon_in(rng, data.mbr, 1.0, 6.0);
      const auto expected = oracle::naive_selection(q, data);
      for (FilterKind filter : {FilterKind::None, FilterKind::Ri, FilterKind::April}) {
        cfg.filter = filter;
        CHECK(run_selection(q, data, cfg).ids == expected);
      }
    }
  }
  SUBCASE("query overlapping but poking outside the extent is an error") {
    Mbr m = data.mbr;
    const SimplePolygon poking =
        make_polygon({{m.xmax - 1, m.ymax - 1}, {m.xmax + 5, m.ymax - 1},
                      {m.xmax + 5, m.ymax + 5}, {m.xmax - 1, m.ymax + 5}});
    CHECK_THROWS_AS(run_selection(poking, data, cfg), std::invalid_argument);
  }
}

TEST_CASE("stats accounting identity") {
  synthetic::Rng rng(609);
  const Mbr area{0, 0, 40, 40};
  const Dataset r = synthetic::random_polygon_dataset(rng, 40, area, 0.8, 3.0);
  const Dataset s = synthetic::random_polygon_dataset(rng, 40, area, 0.8, 3.0);
  JoinConfig cfg;
  cfg.order = 12;
  cfg.compressed = true;
  const JoinResult res = run_join(r, s, JoinPredicate::Intersects, cfg);
  CHECK(res.stats.candidates ==
        res.stats.true_hits + res.stats.true_negatives + res.stats.indecisive);
  CHECK(res.stats.results() == res.stats.true_hits + res.stats.refined_accepted);
  CHECK(res.stats.total_s >= 0.0);
}
