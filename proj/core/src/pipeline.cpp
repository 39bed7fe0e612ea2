#include "rasterjoin/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace rasterjoin {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

const Mbr& geometry_mbr(const Geometry& g) {
  if (const auto* poly = std::get_if<SimplePolygon>(&g)) return poly->mbr;
  return std::get<Linestring>(g).mbr;
}

Dataset make_dataset(std::vector<DatasetObject> objects) {
  if (objects.empty()) throw std::invalid_argument("dataset is empty");
  Dataset d;
  d.mbr = geometry_mbr(objects.front().geometry);
  std::vector<std::uint32_t> ids;
  ids.reserve(objects.size());
  for (const DatasetObject& obj : objects) {
    d.mbr.expand(geometry_mbr(obj.geometry));
    ids.push_back(obj.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw std::invalid_argument("duplicate object id in dataset");
  d.objects = std::move(objects);
  return d;
}

namespace {

struct BoxRef {
  Mbr mbr;
  std::uint32_t index;  // position in the dataset's object vector
};

std::vector<BoxRef> sorted_boxes(const Dataset& d, std::span<const std::uint32_t> members) {
  std::vector<BoxRef> boxes;
  boxes.reserve(members.size());
  for (std::uint32_t idx : members)
    boxes.push_back(BoxRef{geometry_mbr(d.objects[idx].geometry), idx});
  std::sort(boxes.begin(), boxes.end(),
            [](const BoxRef& a, const BoxRef& b) { return a.mbr.xmin < b.mbr.xmin; });
  return boxes;
}

// Forward plane sweep on x; emits every pair whose MBRs intersect (closed).
template <typename Emit>
void sweep_pairs(std::span<const BoxRef> rs, std::span<const BoxRef> ss, Emit&& emit) {
  std::size_t i = 0, j = 0;
  while (i < rs.size() && j < ss.size()) {
    if (rs[i].mbr.xmin <= ss[j].mbr.xmin) {
      const BoxRef& r = rs[i];
      for (std::size_t k = j; k < ss.size() && ss[k].mbr.xmin <= r.mbr.xmax; ++k) {
        if (r.mbr.ymin <= ss[k].mbr.ymax && ss[k].mbr.ymin <= r.mbr.ymax)
          emit(r, ss[k]);
      }
      ++i;
    } else {
      const BoxRef& s = ss[j];
      for (std::size_t k = i; k < rs.size() && rs[k].mbr.xmin <= s.mbr.xmax; ++k) {
        if (s.mbr.ymin <= rs[k].mbr.ymax && rs[k].mbr.ymin <= s.mbr.ymax)
          emit(rs[k], s);
      }
      ++j;
    }
  }
}

std::vector<std::uint32_t> all_indices(const Dataset& d) {
  std::vector<std::uint32_t> idx(d.objects.size());
  for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

}  // namespace

std::vector<IdPair> mbr_join(const Dataset& r, const Dataset& s, MbrPredicate predicate) {
  const auto rs = sorted_boxes(r, all_indices(r));
  const auto ss = sorted_boxes(s, all_indices(s));
  std::vector<IdPair> out;
  sweep_pairs(rs, ss, [&](const BoxRef& a, const BoxRef& b) {
    if (predicate == MbrPredicate::Within && !mbr_within(a.mbr, b.mbr)) return;
    out.push_back(IdPair{r.objects[a.index].id, s.objects[b.index].id});
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t PartitionScheme::tile_of_point(double x, double y) const {
  const double tile_w = map_mbr.width() / p;
  const double tile_h = map_mbr.height() / p;
  auto col = static_cast<std::int64_t>(std::floor((x - map_mbr.xmin) / tile_w));
  auto row = static_cast<std::int64_t>(std::floor((y - map_mbr.ymin) / tile_h));
  col = std::max<std::int64_t>(0, std::min<std::int64_t>(col, p - 1));
  row = std::max<std::int64_t>(0, std::min<std::int64_t>(row, p - 1));
  return static_cast<std::uint32_t>(row * p + col);
}

PartitionScheme partition(const Dataset& r, const Dataset& s, int p, int order) {
  if (p < 1) throw std::invalid_argument("partitions per dimension must be >= 1");
  PartitionScheme scheme;
  scheme.p = p;
  scheme.map_mbr = r.mbr;
  scheme.map_mbr.expand(s.mbr);

  const double tile_w = scheme.map_mbr.width() / p;
  const double tile_h = scheme.map_mbr.height() / p;
  scheme.tiles.resize(std::size_t(p) * p);
  for (int row = 0; row < p; ++row) {
    for (int col = 0; col < p; ++col) {
      PartitionTile& tile = scheme.tiles[std::size_t(row) * p + col];
      tile.rect = Mbr{scheme.map_mbr.xmin + col * tile_w, scheme.map_mbr.ymin + row * tile_h,
                      scheme.map_mbr.xmin + (col + 1) * tile_w,
                      scheme.map_mbr.ymin + (row + 1) * tile_h};
    }
  }

  auto assign = [&](const Dataset& d, bool right_side) {
    for (std::uint32_t i = 0; i < d.objects.size(); ++i) {
      const Mbr& box = geometry_mbr(d.objects[i].geometry);
      for (auto& tile : scheme.tiles) {
        if (!mbr_intersects(box, tile.rect)) continue;
        auto& members = right_side ? tile.s_members : tile.r_members;
        if (members.empty() && (right_side ? tile.r_members.empty() : tile.s_members.empty()))
          tile.raster_extent = box;
        else
          tile.raster_extent.expand(box);
        members.push_back(i);
      }
    }
  };
  assign(r, false);
  assign(s, true);

  for (auto& tile : scheme.tiles) {
    if (tile.r_members.empty() || tile.s_members.empty()) continue;
    Mbr extent = tile.raster_extent;
    // Guard against degenerate extents (e.g. a tile holding one horizontal line).
    if (extent.width() <= 0.0) extent.xmax = extent.xmin + std::max(1e-9, extent.height() * 1e-9);
    if (extent.height() <= 0.0) extent.ymax = extent.ymin + std::max(1e-9, extent.width() * 1e-9);
    tile.grid = grid_for_extent(extent, order);
  }
  return scheme;
}

void JoinStats::merge(const JoinStats& other) {
  candidates += other.candidates;
  true_hits += other.true_hits;
  true_negatives += other.true_negatives;
  indecisive += other.indecisive;
  refined_accepted += other.refined_accepted;
  build_s += other.build_s;
  mbr_join_s += other.mbr_join_s;
  filter_s += other.filter_s;
  refine_s += other.refine_s;
  total_s += other.total_s;
}

namespace {

struct TileOutcome {
  std::vector<IdPair> pairs;
  JoinStats stats;
};

// Per-tile approximations for the members, in member order.
struct TileApprox {
  std::vector<AprilApprox> april;
  std::vector<CompressedApril> capril;
  std::vector<RiApprox> ri;
  std::vector<std::vector<CellId>> cells;
  std::vector<CompressedList> ccells;
};

bool refine_pair(const Geometry& r, const Geometry& s, JoinPredicate predicate) {
  switch (predicate) {
    case JoinPredicate::Intersects:
      return polygons_intersect(std::get<SimplePolygon>(r), std::get<SimplePolygon>(s));
    case JoinPredicate::Within:
      return polygon_within(std::get<SimplePolygon>(r), std::get<SimplePolygon>(s));
    default:
      return polygon_linestring_intersect(std::get<SimplePolygon>(r),
                                          std::get<Linestring>(s));
  }
}

TileApprox build_side_approx(const Dataset& d, std::span<const std::uint32_t> members,
                             const GridConfig& grid, JoinPredicate predicate,
                             const JoinConfig& cfg, bool right_side) {
  TileApprox out;
  const bool linestring_side = predicate == JoinPredicate::PolyLine && right_side;
  if (cfg.filter == FilterKind::None) return out;
  for (std::uint32_t idx : members) {
    const Geometry& geom = d.objects[idx].geometry;
    if (linestring_side) {
      auto ids = rasterize_linestring(std::get<Linestring>(geom), grid);
      if (cfg.compressed)
        out.ccells.push_back(encode_cells(ids));
      else
        out.cells.push_back(std::move(ids));
      continue;
    }
    const auto& poly = std::get<SimplePolygon>(geom);
    if (cfg.filter == FilterKind::Ri) {
      out.ri.push_back(build_ri(poly, grid, right_side ? RiSide::S : RiSide::R));
      continue;
    }
    AprilApprox approx = build_april(poly, grid, cfg.backend);
    if (cfg.compressed)
      out.capril.push_back(compress(approx));
    else
      out.april.push_back(std::move(approx));
  }
  return out;
}

Verdict filter_pair(const TileApprox& ra, std::size_t ri_pos, const TileApprox& sa,
                    std::size_t si_pos, JoinPredicate predicate, const JoinConfig& cfg) {
  if (cfg.filter == FilterKind::None) return Verdict::Indecisive;
  if (cfg.filter == FilterKind::Ri) {
    if (predicate == JoinPredicate::Intersects)
      return ri_join(ra.ri[ri_pos], sa.ri[si_pos]);
    // Within: RI certifies disjointness only; hits still need refinement.
    return ri_spans_overlap(ra.ri[ri_pos], sa.ri[si_pos]) ? Verdict::Indecisive
                                                          : Verdict::TrueNegative;
  }
  switch (predicate) {
    case JoinPredicate::Intersects:
      return cfg.compressed
                 ? intersect_filter(ra.capril[ri_pos], sa.capril[si_pos], cfg.join_order)
                 : intersect_filter(ra.april[ri_pos], sa.april[si_pos], cfg.join_order);
    case JoinPredicate::Within:
      return cfg.compressed ? within_filter(ra.capril[ri_pos], sa.capril[si_pos])
                            : within_filter(ra.april[ri_pos], sa.april[si_pos]);
    default:
      return cfg.compressed ? linestring_filter(ra.capril[ri_pos], sa.ccells[si_pos])
                            : linestring_filter(ra.april[ri_pos], sa.cells[si_pos]);
  }
}

TileOutcome process_tile(const Dataset& r, const Dataset& s, const PartitionScheme& scheme,
                         const PartitionTile& tile, JoinPredicate predicate,
                         const JoinConfig& cfg) {
  TileOutcome out;
  if (tile.r_members.empty() || tile.s_members.empty()) return out;

  auto t0 = Clock::now();
  // Member position lookup: dataset object index -> position in the member list.
  std::vector<std::uint32_t> r_pos(r.objects.size()), s_pos(s.objects.size());
  for (std::uint32_t k = 0; k < tile.r_members.size(); ++k) r_pos[tile.r_members[k]] = k;
  for (std::uint32_t k = 0; k < tile.s_members.size(); ++k) s_pos[tile.s_members[k]] = k;

  const TileApprox ra = build_side_approx(r, tile.r_members, tile.grid, predicate, cfg, false);
  const TileApprox sa = build_side_approx(s, tile.s_members, tile.grid, predicate, cfg, true);
  out.stats.build_s = seconds_since(t0);

  t0 = Clock::now();
  const auto r_boxes = sorted_boxes(r, tile.r_members);
  const auto s_boxes = sorted_boxes(s, tile.s_members);
  const MbrPredicate mbr_pred =
      predicate == JoinPredicate::Within ? MbrPredicate::Within : MbrPredicate::Intersects;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> candidates;
  sweep_pairs(r_boxes, s_boxes, [&](const BoxRef& a, const BoxRef& b) {
    if (mbr_pred == MbrPredicate::Within && !mbr_within(a.mbr, b.mbr)) return;
    if (scheme.p > 1) {
      // Reference-point rule: only the tile holding the bottom-left corner of
      // the common MBR processes the pair.
      const double ref_x = std::max(a.mbr.xmin, b.mbr.xmin);
      const double ref_y = std::max(a.mbr.ymin, b.mbr.ymin);
      const auto owner = scheme.tile_of_point(ref_x, ref_y);
      if (&scheme.tiles[owner] != &tile) return;
    }
    candidates.emplace_back(a.index, b.index);
  });
  out.stats.mbr_join_s = seconds_since(t0);
  out.stats.candidates = candidates.size();

  std::vector<std::pair<std::uint32_t, std::uint32_t>> to_refine;
  t0 = Clock::now();
  for (const auto& [ri_idx, si_idx] : candidates) {
    const Verdict v =
        filter_pair(ra, r_pos[ri_idx], sa, s_pos[si_idx], predicate, cfg);
    switch (v) {
      case Verdict::TrueHit:
        ++out.stats.true_hits;
        out.pairs.push_back(IdPair{r.objects[ri_idx].id, s.objects[si_idx].id});
        break;
      case Verdict::TrueNegative:
        ++out.stats.true_negatives;
        break;
      case Verdict::Indecisive:
        ++out.stats.indecisive;
        to_refine.emplace_back(ri_idx, si_idx);
        break;
    }
  }
  out.stats.filter_s = seconds_since(t0);

  t0 = Clock::now();
  for (const auto& [ri_idx, si_idx] : to_refine) {
    if (refine_pair(r.objects[ri_idx].geometry, s.objects[si_idx].geometry, predicate)) {
      ++out.stats.refined_accepted;
      out.pairs.push_back(IdPair{r.objects[ri_idx].id, s.objects[si_idx].id});
    }
  }
  out.stats.refine_s = seconds_since(t0);
  return out;
}

void validate_join_inputs(const Dataset& r, const Dataset& s, JoinPredicate predicate,
                          const JoinConfig& cfg) {
  if (cfg.filter == FilterKind::Ri && predicate == JoinPredicate::PolyLine)
    throw std::invalid_argument("RI filter does not support polygon-linestring joins");
  if (cfg.filter == FilterKind::Ri && cfg.compressed)
    throw std::invalid_argument("compression is only available for the APRIL filter");
  if (!valid_join_order(cfg.join_order))
    throw std::invalid_argument("join order must use each phase exactly once");
  auto expect_polygons = [](const Dataset& d, const char* side) {
    for (const auto& obj : d.objects)
      if (!std::holds_alternative<SimplePolygon>(obj.geometry))
        throw std::invalid_argument(std::string(side) + " dataset must contain polygons");
  };
  expect_polygons(r, "left");
  if (predicate == JoinPredicate::PolyLine) {
    for (const auto& obj : s.objects)
      if (!std::holds_alternative<Linestring>(obj.geometry))
        throw std::invalid_argument("right dataset must contain linestrings");
  } else {
    expect_polygons(s, "right");
  }
}

}  // namespace

JoinResult run_join(const Dataset& r, const Dataset& s, JoinPredicate predicate,
                    const JoinConfig& cfg) {
  validate_join_inputs(r, s, predicate, cfg);
  const auto start = Clock::now();
  const PartitionScheme scheme = partition(r, s, cfg.partitions, cfg.order);

  std::vector<TileOutcome> outcomes(scheme.tiles.size());
  if (cfg.threads > 1 && scheme.tiles.size() > 1) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        const std::size_t t = next.fetch_add(1);
        if (t >= scheme.tiles.size()) return;
        outcomes[t] = process_tile(r, s, scheme, scheme.tiles[t], predicate, cfg);
      }
    };
    std::vector<std::thread> pool;
    const std::size_t n = std::min<std::size_t>(cfg.threads, scheme.tiles.size());
    pool.reserve(n);
    for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t t = 0; t < scheme.tiles.size(); ++t)
      outcomes[t] = process_tile(r, s, scheme, scheme.tiles[t], predicate, cfg);
  }

  JoinResult result;
  for (TileOutcome& o : outcomes) {
    result.stats.merge(o.stats);
    result.pairs.insert(result.pairs.end(), o.pairs.begin(), o.pairs.end());
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  result.stats.total_s = seconds_since(start);
  return result;
}

SelectionResult run_selection(const SimplePolygon& query, const Dataset& data,
                              const JoinConfig& cfg) {
  const auto start = Clock::now();
  SelectionResult out;
  if (!mbr_intersects(query.mbr, data.mbr)) {
    out.stats.total_s = seconds_since(start);
    return out;
  }
  const GridConfig grid = grid_for_extent(data.mbr, cfg.order);
  if (!mbr_within(query.mbr, grid.extent))
    throw std::invalid_argument("query polygon outside the dataset extent");

  auto t0 = Clock::now();
  AprilApprox query_april;
  CompressedApril query_capril;
  RiApprox query_ri;
  if (cfg.filter == FilterKind::Ri) {
    query_ri = build_ri(query, grid, RiSide::R);
  } else if (cfg.filter == FilterKind::April) {
    query_april = build_april(query, grid, cfg.backend);
    if (cfg.compressed) query_capril = compress(query_april);
  }
  out.stats.build_s = seconds_since(t0);

  for (const DatasetObject& obj : data.objects) {
    const auto& poly = std::get<SimplePolygon>(obj.geometry);
    if (!mbr_intersects(query.mbr, poly.mbr)) continue;
    ++out.stats.candidates;

    Verdict v = Verdict::Indecisive;
    t0 = Clock::now();
    if (cfg.filter == FilterKind::Ri) {
      v = ri_join(query_ri, build_ri(poly, grid, RiSide::S));
    } else if (cfg.filter == FilterKind::April) {
      if (cfg.compressed)
        v = intersect_filter(query_capril, compress(build_april(poly, grid, cfg.backend)),
                             cfg.join_order);
      else
        v = intersect_filter(query_april, build_april(poly, grid, cfg.backend),
                             cfg.join_order);
    }
    out.stats.filter_s += seconds_since(t0);

    switch (v) {
      case Verdict::TrueHit:
        ++out.stats.true_hits;
        out.ids.push_back(obj.id);
        break;
      case Verdict::TrueNegative:
        ++out.stats.true_negatives;
        break;
      case Verdict::Indecisive: {
        ++out.stats.indecisive;
        t0 = Clock::now();
        if (polygons_intersect(poly, query)) {
          ++out.stats.refined_accepted;
          out.ids.push_back(obj.id);
        }
        out.stats.refine_s += seconds_since(t0);
        break;
      }
    }
  }
  std::sort(out.ids.begin(), out.ids.end());
  out.stats.total_s = seconds_since(start);
  return out;
}

}  // namespace rasterjoin
