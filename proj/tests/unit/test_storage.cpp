#include <doctest.h>

#include <stdexcept>

#include <cstdio>

#include "../support/synthetic.hpp"
#include "rasterjoin/approx_file.hpp"
#include "rasterjoin/wkt.hpp"

using namespace rasterjoin;

TEST_CASE("wkt parsing") {
  const auto poly = parse_wkt_line("POLYGON ((0 0, 4 0, 4 4, 0 4, 0 0))");
  REQUIRE(poly.geometry.has_value());
  CHECK(std::get<SimplePolygon>(*poly.geometry).ring.size() == 4);

  const auto with_id = parse_wkt_line("42;LINESTRING (0 0, 1 1, 2 0.5)");
  REQUIRE(with_id.geometry.has_value());
  CHECK(with_id.id == 42);
  CHECK(std::get<Linestring>(*with_id.geometry).vertices.size() == 3);

  const auto multi = parse_wkt_line("MULTIPOLYGON (((0 0, 1 0, 1 1, 0 0)))");
  CHECK_FALSE(multi.geometry.has_value());
  CHECK_FALSE(multi.skip_reason.empty());

  const auto holes = parse_wkt_line(
      "POLYGON ((0 0, 9 0, 9 9, 0 9, 0 0), (2 2, 3 2, 3 3, 2 3, 2 2))");
  CHECK_FALSE(holes.geometry.has_value());

  const auto degenerate = parse_wkt_line("POLYGON ((0 0, 1 1, 2 2, 0 0))");
  CHECK_FALSE(degenerate.geometry.has_value());

  CHECK_THROWS_AS(parse_wkt_line("POLYGON ((0 0, banana, 1 1))"), std::invalid_argument);
  CHECK_THROWS_AS(parse_wkt_line("TRIANGLE ((0 0, 1 0, 1 1))"), std::invalid_argument);
}

TEST_CASE("wkt roundtrip through the writer") {
  const Geometry g = make_polygon({{0.5, 0.25}, {4.125, 0}, {3, 3.75}});
  const auto parsed = parse_wkt_line(to_wkt(g));
  REQUIRE(parsed.geometry.has_value());
  CHECK(std::get<SimplePolygon>(*parsed.geometry).ring ==
        std::get<SimplePolygon>(g).ring);
}

namespace {

struct TempDir {
  std::string path;
  TempDir() {
    char tmpl[] = "/tmp/rasterjoin_test_XXXXXX";
    path = mkdtemp(tmpl);
  }
  std::string file(const std::string& name) const { return path + "/" + name; }
};

}  // namespace

TEST_CASE("approx file roundtrips byte-identically") {
  synthetic::Rng rng(701);
  const Mbr area{0, 0, 40, 40};
  const Dataset polys = synthetic::random_polygon_dataset(rng, 30, area, 0.8, 4.0);
  const Dataset lines = synthetic::random_linestring_dataset(rng, 20, area, 6, 5.0);
  TempDir dir;

  auto roundtrip = [&](const ApproxFile& f, const char* name) {
    const auto file = dir.file(name);
    save_approx_file(f, file);
    const ApproxFile loaded = load_approx_file(file);
    CHECK(serialize(loaded) == serialize(f));
    return loaded;
  };

  SUBCASE("april, plain and compressed") {
    const ApproxFile plain = build_approx_file(polys, ApproxKind::April, 10,
                                               FillBackend::OneStep, RiSide::R, false, 1);
    const ApproxFile loaded = roundtrip(plain, "a.april");
    CHECK(loaded.tiles[0].records.size() == polys.objects.size());

    const ApproxFile comp = build_approx_file(polys, ApproxKind::April, 10,
                                              FillBackend::OneStep, RiSide::R, true, 1);
    const ApproxFile cloaded = roundtrip(comp, "ac.april");
    // Compressed payloads decode to the plain lists.
    for (std::size_t i = 0; i < cloaded.tiles[0].records.size(); ++i) {
      CHECK(decode_intervals(cloaded.tiles[0].records[i].a_comp) ==
            plain.tiles[0].records[i].a_plain);
      CHECK(decode_intervals(cloaded.tiles[0].records[i].f_comp) ==
            plain.tiles[0].records[i].f_plain);
    }
  }
  SUBCASE("ri") {
    const ApproxFile f = build_approx_file(polys, ApproxKind::Ri, 8, FillBackend::Scanline,
                                           RiSide::S, false, 1);
    const ApproxFile loaded = roundtrip(f, "b.april");
    CHECK(loaded.ri_side == RiSide::S);
    CHECK_FALSE(loaded.tiles[0].records[0].ri_intervals.empty());
  }
  SUBCASE("linestring cells") {
    const ApproxFile f = build_approx_file(lines, ApproxKind::LinestringCells, 10,
                                           FillBackend::OneStep, RiSide::R, false, 1);
    roundtrip(f, "c.april");
  }
  SUBCASE("partitioned") {
    const ApproxFile f = build_approx_file(polys, ApproxKind::April, 10,
                                           FillBackend::OneStep, RiSide::R, false, 3);
    const ApproxFile loaded = roundtrip(f, "d.april");
    CHECK(loaded.tiles.size() == 9);
  }
}

TEST_CASE("parse_approx_file rejects malformed input") {
  CHECK_THROWS_AS(parse_approx_file(std::vector<std::uint8_t>{'X', 'Y'}),
                  std::runtime_error);
  std::vector<std::uint8_t> bad{'A', 'P', 'R', 'L', 9};
  CHECK_THROWS_AS(parse_approx_file(bad), std::runtime_error);
}

TEST_CASE("prebuilt joins match in-memory joins") {
  synthetic::Rng rng(702);
  const Mbr area{0, 0, 50, 50};
  const Dataset r = synthetic::random_polygon_dataset(rng, 40, area, 0.8, 3.0);
  const Dataset s = synthetic::random_polygon_dataset(rng, 40, area, 0.8, 3.0);
  Mbr map = r.mbr;
  map.expand(s.mbr);

  JoinConfig cfg;
  cfg.order = 10;
  const JoinResult expected = run_join(r, s, JoinPredicate::Intersects, cfg);

  SUBCASE("same order april") {
    const ApproxFile rf = build_approx_file(r, ApproxKind::April, 10, FillBackend::OneStep,
                                            RiSide::R, false, 1, map);
    const ApproxFile sf = build_approx_file(s, ApproxKind::April, 10, FillBackend::OneStep,
                                            RiSide::R, true, 1, map);
    const JoinResult res = run_join_prebuilt(r, rf, s, sf, JoinPredicate::Intersects, cfg);
    CHECK(res.pairs == expected.pairs);
  }
  SUBCASE("mixed order april") {
    const ApproxFile rf = build_approx_file(r, ApproxKind::April, 12, FillBackend::OneStep,
                                            RiSide::R, false, 1, map);
    const ApproxFile sf = build_approx_file(s, ApproxKind::April, 9, FillBackend::OneStep,
                                            RiSide::R, false, 1, map);
    const JoinResult res = run_join_prebuilt(r, rf, s, sf, JoinPredicate::Intersects, cfg);
    CHECK(res.pairs == expected.pairs);  // exact results regardless of orders
  }
  SUBCASE("ri files") {
    const ApproxFile rf = build_approx_file(r, ApproxKind::Ri, 9, FillBackend::OneStep,
                                            RiSide::R, false, 1, map);
    const ApproxFile sf = build_approx_file(s, ApproxKind::Ri, 9, FillBackend::OneStep,
                                            RiSide::S, false, 1, map);
    const JoinResult res = run_join_prebuilt(r, rf, s, sf, JoinPredicate::Intersects, cfg);
    CHECK(res.pairs == expected.pairs);
  }
  SUBCASE("incompatible extents are a diagnostic error") {
    const ApproxFile rf = build_approx_file(r, ApproxKind::April, 10, FillBackend::OneStep,
                                            RiSide::R, false, 1);
    const ApproxFile sf = build_approx_file(s, ApproxKind::April, 10, FillBackend::OneStep,
                                            RiSide::R, false, 1);
    CHECK_THROWS_AS(run_join_prebuilt(r, rf, s, sf, JoinPredicate::Intersects, cfg),
                    std::invalid_argument);
  }
}
