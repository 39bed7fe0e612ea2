#include "rasterjoin/approx_file.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace rasterjoin {

namespace {

constexpr char kMagic[4] = {'A', 'P', 'R', 'L'};

struct Writer {
  std::vector<std::uint8_t> bytes;

  void u8(std::uint8_t v) { bytes.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void raw(std::span<const std::uint8_t> data) {
    bytes.insert(bytes.end(), data.begin(), data.end());
  }
  void mbr(const Mbr& m) {
    f64(m.xmin);
    f64(m.ymin);
    f64(m.xmax);
    f64(m.ymax);
  }
};

struct Reader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  void need(std::size_t n) {
    if (pos + n > bytes.size()) throw std::runtime_error("truncated approximation file");
  }
  std::uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= std::uint16_t(bytes[pos++]) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes[pos++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(bytes[pos++]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::span<const std::uint8_t> raw(std::size_t n) {
    need(n);
    auto s = bytes.subspan(pos, n);
    pos += n;
    return s;
  }
  Mbr mbr() {
    Mbr m;
    m.xmin = f64();
    m.ymin = f64();
    m.xmax = f64();
    m.ymax = f64();
    return m;
  }
};

// Interval bounds are stored as u32; the one representable overflow, an end of
// 2^32 (one past the last cell of an order-16 grid), is stored as 0.
std::uint32_t bound_to_u32(IntervalBound b) {
  return static_cast<std::uint32_t>(b);  // 2^32 wraps to 0
}

IntervalBound bound_from_u32(std::uint32_t v, bool is_end) {
  if (is_end && v == 0) return IntervalBound(1) << 32;
  return v;
}

void write_interval_payload(Writer& w, const IntervalList& list) {
  w.u32(static_cast<std::uint32_t>(list.flat().size() * 4));
  for (std::size_t i = 0; i < list.size(); ++i) {
    w.u32(bound_to_u32(list.start(i)));
    w.u32(bound_to_u32(list.end(i)));
  }
}

IntervalList read_interval_payload(Reader& r) {
  const std::uint32_t len = r.u32();
  if (len % 8 != 0) throw std::runtime_error("bad interval payload length");
  std::vector<IntervalBound> flat;
  flat.reserve(len / 4);
  for (std::uint32_t i = 0; i < len / 8; ++i) {
    flat.push_back(bound_from_u32(r.u32(), false));
    flat.push_back(bound_from_u32(r.u32(), true));
  }
  return IntervalList::from_flat(std::move(flat));
}

void write_compressed_payload(Writer& w, const CompressedList& list) {
  w.u32(static_cast<std::uint32_t>(4 + list.bytes.size()));
  w.u32(list.count);
  w.raw(list.bytes);
}

CompressedList read_compressed_payload(Reader& r) {
  const std::uint32_t len = r.u32();
  if (len < 4) throw std::runtime_error("bad compressed payload length");
  CompressedList list;
  list.count = r.u32();
  auto data = r.raw(len - 4);
  list.bytes.assign(data.begin(), data.end());
  return list;
}

void write_record(Writer& w, const ApproxFile& f, const ApproxRecord& rec) {
  w.u32(rec.id);
  switch (f.kind) {
    case ApproxKind::April:
      if (f.compressed) {
        write_compressed_payload(w, rec.a_comp);
        write_compressed_payload(w, rec.f_comp);
      } else {
        write_interval_payload(w, rec.a_plain);
        write_interval_payload(w, rec.f_plain);
      }
      break;
    case ApproxKind::LinestringCells:
      if (f.compressed) {
        write_compressed_payload(w, rec.cells_comp);
        w.u32(0);
      } else {
        w.u32(static_cast<std::uint32_t>(rec.cells_plain.size() * 4));
        for (CellId c : rec.cells_plain) w.u32(c);
        w.u32(0);
      }
      break;
    case ApproxKind::Ri:
      w.u32(static_cast<std::uint32_t>(rec.ri_intervals.size()));
      for (const RiInterval& iv : rec.ri_intervals) {
        w.u32(bound_to_u32(iv.start));
        w.u32(bound_to_u32(iv.end));
        w.u16(static_cast<std::uint16_t>(iv.code.size()));
        w.raw(iv.code);
      }
      break;
  }
}

ApproxRecord read_record(Reader& r, const ApproxFile& f) {
  ApproxRecord rec;
  rec.id = r.u32();
  switch (f.kind) {
    case ApproxKind::April:
      if (f.compressed) {
        rec.a_comp = read_compressed_payload(r);
        rec.f_comp = read_compressed_payload(r);
      } else {
        rec.a_plain = read_interval_payload(r);
        rec.f_plain = read_interval_payload(r);
      }
      break;
    case ApproxKind::LinestringCells:
      if (f.compressed) {
        rec.cells_comp = read_compressed_payload(r);
        r.u32();
      } else {
        const std::uint32_t len = r.u32();
        if (len % 4 != 0) throw std::runtime_error("bad cell payload length");
        rec.cells_plain.reserve(len / 4);
        for (std::uint32_t i = 0; i < len / 4; ++i) rec.cells_plain.push_back(r.u32());
        r.u32();
      }
      break;
    case ApproxKind::Ri: {
      const std::uint32_t n = r.u32();
      rec.ri_intervals.reserve(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        RiInterval iv;
        iv.start = bound_from_u32(r.u32(), false);
        iv.end = bound_from_u32(r.u32(), true);
        const std::uint16_t code_len = r.u16();
        auto code = r.raw(code_len);
        iv.code.assign(code.begin(), code.end());
        rec.ri_intervals.push_back(std::move(iv));
      }
      break;
    }
  }
  return rec;
}

}  // namespace

GridConfig ApproxFile::tile_grid(std::size_t tile_index) const {
  const Mbr& extent = partitions == 1 ? map_mbr : tiles.at(tile_index).raster_extent;
  return grid_for_extent(extent, order);
}

std::vector<std::uint8_t> serialize(const ApproxFile& file) {
  Writer w;
  w.raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
  w.u8(file.version);
  w.u8(static_cast<std::uint8_t>(file.kind));
  w.u8(file.order);
  std::uint8_t flags = 0;
  if (file.compressed) flags |= 0x01;
  if (file.kind == ApproxKind::Ri && file.ri_side == RiSide::S) flags |= 0x02;
  w.u8(flags);
  w.u16(file.partitions);
  w.mbr(file.map_mbr);
  std::uint32_t total = 0;
  for (const auto& tile : file.tiles) total += static_cast<std::uint32_t>(tile.records.size());
  w.u32(total);
  if (file.partitions == 1) {
    for (const ApproxRecord& rec : file.tiles.at(0).records) write_record(w, file, rec);
  } else {
    for (const auto& tile : file.tiles) {
      w.mbr(tile.raster_extent);
      w.u32(static_cast<std::uint32_t>(tile.records.size()));
      for (const ApproxRecord& rec : tile.records) write_record(w, file, rec);
    }
  }
  return std::move(w.bytes);
}

ApproxFile parse_approx_file(std::span<const std::uint8_t> bytes) {
  Reader r{bytes};
  const auto magic = r.raw(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    throw std::runtime_error("not an approximation file (bad magic)");
  ApproxFile f;
  f.version = r.u8();
  if (f.version != 1) throw std::runtime_error("unsupported file version");
  const std::uint8_t kind = r.u8();
  if (kind > 2) throw std::runtime_error("unknown approximation kind");
  f.kind = static_cast<ApproxKind>(kind);
  f.order = r.u8();
  if (f.order < 1 || f.order > kMaxGridOrder) throw std::runtime_error("bad grid order");
  const std::uint8_t flags = r.u8();
  f.compressed = flags & 0x01;
  f.ri_side = (flags & 0x02) ? RiSide::S : RiSide::R;
  f.partitions = r.u16();
  if (f.partitions < 1) throw std::runtime_error("bad partition count");
  f.map_mbr = r.mbr();
  const std::uint32_t total = r.u32();
  if (f.partitions == 1) {
    ApproxFile::Tile tile;
    tile.raster_extent = f.map_mbr;
    tile.records.reserve(total);
    for (std::uint32_t i = 0; i < total; ++i) tile.records.push_back(read_record(r, f));
    f.tiles.push_back(std::move(tile));
  } else {
    std::uint32_t seen = 0;
    const std::uint32_t tile_count = std::uint32_t(f.partitions) * f.partitions;
    f.tiles.reserve(tile_count);
    for (std::uint32_t t = 0; t < tile_count; ++t) {
      ApproxFile::Tile tile;
      tile.raster_extent = r.mbr();
      const std::uint32_t n = r.u32();
      tile.records.reserve(n);
      for (std::uint32_t i = 0; i < n; ++i) tile.records.push_back(read_record(r, f));
      seen += n;
      f.tiles.push_back(std::move(tile));
    }
    if (seen != total) throw std::runtime_error("record count mismatch");
  }
  if (r.pos != bytes.size()) throw std::runtime_error("trailing bytes in approximation file");
  return f;
}

void save_approx_file(const ApproxFile& file, const std::string& path) {
  const auto bytes = serialize(file);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

ApproxFile load_approx_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_approx_file(bytes);
}

ApproxFile build_approx_file(const Dataset& dataset, ApproxKind kind, int order,
                             FillBackend backend, RiSide side, bool compressed, int p,
                             std::optional<Mbr> map_override, BuildFileStats* stats) {
  if (p < 1) throw std::invalid_argument("partitions per dimension must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  ApproxFile f;
  f.kind = kind;
  f.order = static_cast<std::uint8_t>(order);
  f.compressed = compressed;
  f.ri_side = side;
  f.partitions = static_cast<std::uint16_t>(p);
  f.map_mbr = map_override.value_or(dataset.mbr);
  if (!mbr_within(dataset.mbr, f.map_mbr))
    throw std::invalid_argument("dataset extends outside the given map extent");

  BuildFileStats local;
  // Tile rectangles over the map; with p == 1 the single raster extent is the
  // map MBR itself.
  const double tile_w = f.map_mbr.width() / p;
  const double tile_h = f.map_mbr.height() / p;
  for (int row = 0; row < p; ++row) {
    for (int col = 0; col < p; ++col) {
      ApproxFile::Tile tile;
      const Mbr rect{f.map_mbr.xmin + col * tile_w, f.map_mbr.ymin + row * tile_h,
                     f.map_mbr.xmin + (col + 1) * tile_w, f.map_mbr.ymin + (row + 1) * tile_h};
      std::vector<const DatasetObject*> members;
      for (const DatasetObject& obj : dataset.objects) {
        if (p == 1 || mbr_intersects(geometry_mbr(obj.geometry), rect))
          members.push_back(&obj);
      }
      if (p == 1) {
        tile.raster_extent = f.map_mbr;
      } else if (!members.empty()) {
        tile.raster_extent = geometry_mbr(members.front()->geometry);
        for (const auto* obj : members) tile.raster_extent.expand(geometry_mbr(obj->geometry));
      } else {
        tile.raster_extent = rect;
        f.tiles.push_back(std::move(tile));
        continue;
      }
      const GridConfig grid = grid_for_extent(tile.raster_extent, order);
      for (const auto* obj : members) {
        const bool want_lines = kind == ApproxKind::LinestringCells;
        if (want_lines != std::holds_alternative<Linestring>(obj->geometry))
          throw std::invalid_argument(
              want_lines ? "linestring-cells approximations need linestring input"
                         : "polygon approximations need polygon input");
        ApproxRecord rec;
        rec.id = obj->id;
        switch (kind) {
          case ApproxKind::April: {
            const AprilApprox approx =
                build_april(std::get<SimplePolygon>(obj->geometry), grid, backend);
            local.intervals += approx.a_list.size() + approx.f_list.size();
            if (compressed) {
              const CompressedApril c = compress(approx);
              local.payload_bytes += c.a_list.bytes.size() + c.f_list.bytes.size();
              rec.a_comp = c.a_list;
              rec.f_comp = c.f_list;
            } else {
              local.payload_bytes += (approx.a_list.flat().size() +
                                      approx.f_list.flat().size()) * 4;
              rec.a_plain = approx.a_list;
              rec.f_plain = approx.f_list;
            }
            break;
          }
          case ApproxKind::LinestringCells: {
            auto cells = rasterize_linestring(std::get<Linestring>(obj->geometry), grid);
            local.intervals += cells.size();
            if (compressed) {
              rec.cells_comp = encode_cells(cells);
              local.payload_bytes += rec.cells_comp.bytes.size();
            } else {
              local.payload_bytes += cells.size() * 4;
              rec.cells_plain = std::move(cells);
            }
            break;
          }
          case ApproxKind::Ri: {
            RiApprox ri = build_ri(std::get<SimplePolygon>(obj->geometry), grid, side);
            local.intervals += ri.intervals.size();
            for (const RiInterval& iv : ri.intervals)
              local.payload_bytes += 10 + iv.code.size();
            rec.ri_intervals = std::move(ri.intervals);
            break;
          }
        }
        tile.records.push_back(std::move(rec));
        ++local.objects;
      }
      f.tiles.push_back(std::move(tile));
    }
  }
  local.build_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (stats) *stats = local;
  return f;
}

namespace {

struct LoadedApprox {
  const ApproxRecord* record = nullptr;
};

std::unordered_map<std::uint32_t, const ApproxRecord*> index_records(const ApproxFile& f) {
  std::unordered_map<std::uint32_t, const ApproxRecord*> map;
  for (const auto& tile : f.tiles)
    for (const ApproxRecord& rec : tile.records) map.emplace(rec.id, &rec);
  return map;
}

AprilApprox april_of(const ApproxFile& f, const ApproxRecord& rec) {
  AprilApprox a;
  a.order = f.order;
  if (f.compressed) {
    a.a_list = decode_intervals(rec.a_comp);
    a.f_list = decode_intervals(rec.f_comp);
  } else {
    a.a_list = rec.a_plain;
    a.f_list = rec.f_plain;
  }
  return a;
}

}  // namespace

JoinResult run_join_prebuilt(const Dataset& r, const ApproxFile& rf, const Dataset& s,
                             const ApproxFile& sf, JoinPredicate predicate,
                             const JoinConfig& cfg) {
  if (rf.partitions != 1 || sf.partitions != 1)
    throw std::invalid_argument(
        "prebuilt joins need single-partition files; rebuild with --partitions 1");
  if (rf.map_mbr != sf.map_mbr)
    throw std::invalid_argument(
        "incompatible files: different map extents (rebuild with a shared --extent)");
  const bool mixed = rf.order != sf.order;
  if (mixed && (rf.kind != ApproxKind::April || sf.kind != ApproxKind::April))
    throw std::invalid_argument("only APRIL files can be joined at mixed orders");
  if (predicate == JoinPredicate::PolyLine) {
    if (rf.kind != ApproxKind::April || sf.kind != ApproxKind::LinestringCells)
      throw std::invalid_argument(
          "polyline joins need an APRIL left file and a linestring-cells right file");
  } else if (rf.kind == ApproxKind::Ri || sf.kind == ApproxKind::Ri) {
    if (rf.kind != ApproxKind::Ri || sf.kind != ApproxKind::Ri)
      throw std::invalid_argument("RI files can only be joined with RI files");
    if (predicate == JoinPredicate::Within)
      throw std::invalid_argument("within joins are not supported for RI files");
  } else if (rf.kind != ApproxKind::April || sf.kind != ApproxKind::April) {
    throw std::invalid_argument("incompatible approximation kinds for this predicate");
  }

  const auto start = std::chrono::steady_clock::now();
  const auto r_index = index_records(rf);
  const auto s_index = index_records(sf);

  JoinResult result;
  auto t0 = std::chrono::steady_clock::now();
  const MbrPredicate mbr_pred =
      predicate == JoinPredicate::Within ? MbrPredicate::Within : MbrPredicate::Intersects;
  const std::vector<IdPair> candidates = mbr_join(r, s, mbr_pred);
  result.stats.mbr_join_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.stats.candidates = candidates.size();

  std::unordered_map<std::uint32_t, const DatasetObject*> r_objs, s_objs;
  for (const auto& o : r.objects) r_objs.emplace(o.id, &o);
  for (const auto& o : s.objects) s_objs.emplace(o.id, &o);

  for (const IdPair& pair : candidates) {
    const auto rit = r_index.find(pair.left);
    const auto sit = s_index.find(pair.right);
    if (rit == r_index.end() || sit == s_index.end())
      throw std::runtime_error("approximation file is missing a record for a candidate pair");

    Verdict v = Verdict::Indecisive;
    t0 = std::chrono::steady_clock::now();
    if (rf.kind == ApproxKind::Ri) {
      RiApprox x{rf.order, rf.ri_side, rit->second->ri_intervals};
      RiApprox y{sf.order, sf.ri_side, sit->second->ri_intervals};
      v = ri_join(x, y);
    } else if (predicate == JoinPredicate::PolyLine) {
      if (rf.compressed == sf.compressed && rf.compressed) {
        CompressedApril rc{rf.order, rit->second->a_comp, rit->second->f_comp};
        v = linestring_filter(rc, sit->second->cells_comp);
      } else {
        const AprilApprox ra = april_of(rf, *rit->second);
        const auto cells = sf.compressed ? decode_cells(sit->second->cells_comp)
                                         : sit->second->cells_plain;
        v = linestring_filter(ra, cells);
      }
    } else {
      const AprilApprox ra = april_of(rf, *rit->second);
      const AprilApprox sa = april_of(sf, *sit->second);
      if (mixed)
        v = mixed_order_filter(ra, sa);
      else if (predicate == JoinPredicate::Within)
        v = within_filter(ra, sa);
      else
        v = intersect_filter(ra, sa, cfg.join_order);
    }
    result.stats.filter_s +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    switch (v) {
      case Verdict::TrueHit:
        ++result.stats.true_hits;
        result.pairs.push_back(pair);
        break;
      case Verdict::TrueNegative:
        ++result.stats.true_negatives;
        break;
      case Verdict::Indecisive: {
        ++result.stats.indecisive;
        t0 = std::chrono::steady_clock::now();
        const bool hit = [&] {
          switch (predicate) {
            case JoinPredicate::Intersects:
              return polygons_intersect(std::get<SimplePolygon>(r_objs.at(pair.left)->geometry),
                                        std::get<SimplePolygon>(s_objs.at(pair.right)->geometry));
            case JoinPredicate::Within:
              return polygon_within(std::get<SimplePolygon>(r_objs.at(pair.left)->geometry),
                                    std::get<SimplePolygon>(s_objs.at(pair.right)->geometry));
            default:
              return polygon_linestring_intersect(
                  std::get<SimplePolygon>(r_objs.at(pair.left)->geometry),
                  std::get<Linestring>(s_objs.at(pair.right)->geometry));
          }
        }();
        result.stats.refine_s +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (hit) {
          ++result.stats.refined_accepted;
          result.pairs.push_back(pair);
        }
        break;
      }
    }
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  result.stats.total_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SelectionResult run_selection_prebuilt(const SimplePolygon& query, const Dataset& data,
                                       const ApproxFile& df, const JoinConfig& cfg) {
  if (df.partitions != 1)
    throw std::invalid_argument("prebuilt selections need single-partition files");
  if (df.kind != ApproxKind::April)
    throw std::invalid_argument("prebuilt selections need an APRIL file");

  const auto start = std::chrono::steady_clock::now();
  SelectionResult out;
  if (!mbr_intersects(query.mbr, data.mbr)) {
    out.stats.total_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }
  const GridConfig grid = df.tile_grid(0);
  if (!mbr_within(query.mbr, grid.extent))
    throw std::invalid_argument("query polygon outside the dataset extent");

  auto t0 = std::chrono::steady_clock::now();
  const AprilApprox query_april = build_april(query, grid, cfg.backend);
  out.stats.build_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto records = index_records(df);
  for (const DatasetObject& obj : data.objects) {
    const auto& poly = std::get<SimplePolygon>(obj.geometry);
    if (!mbr_intersects(query.mbr, poly.mbr)) continue;
    ++out.stats.candidates;
    const auto it = records.find(obj.id);
    if (it == records.end())
      throw std::runtime_error("approximation file is missing a record");

    t0 = std::chrono::steady_clock::now();
    const Verdict v = df.order == query_april.order
                          ? intersect_filter(query_april, april_of(df, *it->second),
                                             cfg.join_order)
                          : mixed_order_filter(query_april, april_of(df, *it->second));
    out.stats.filter_s +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    switch (v) {
      case Verdict::TrueHit:
        ++out.stats.true_hits;
        out.ids.push_back(obj.id);
        break;
      case Verdict::TrueNegative:
        ++out.stats.true_negatives;
        break;
      case Verdict::Indecisive:
        ++out.stats.indecisive;
        t0 = std::chrono::steady_clock::now();
        if (polygons_intersect(poly, query)) {
          ++out.stats.refined_accepted;
          out.ids.push_back(obj.id);
        }
        out.stats.refine_s +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        break;
    }
  }
  std::sort(out.ids.begin(), out.ids.end());
  out.stats.total_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace rasterjoin
