#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rasterjoin/pipeline.hpp"

namespace rasterjoin {

enum class ApproxKind : std::uint8_t { April = 0, Ri = 1, LinestringCells = 2 };

/// One persisted approximation. Only the fields of the owning file's kind and
/// compression flag are populated.
struct ApproxRecord {
  std::uint32_t id = 0;
  IntervalList a_plain, f_plain;
  CompressedList a_comp, f_comp;
  std::vector<CellId> cells_plain;
  CompressedList cells_comp;
  std::vector<RiInterval> ri_intervals;
};

/// Binary container for per-object approximations (".april").
///
/// Layout (little-endian): magic "APRL", version u8, kind u8 (0=APRIL, 1=RI,
/// 2=linestring cells), order u8, flags u8 (bit0 compressed, bit1 RI
/// S-encoding), partitions-per-dimension u16, map MBR as 4 f64, record count
/// u32. With one partition the records follow directly and the grid extent is
/// the map MBR; with p > 1, each of the p*p tiles (row-major) stores its
/// raster extent as 4 f64 and its record count u32 before its records.
/// APRIL record: id u32, A byte-length u32, F byte-length u32, payloads (flat
/// u32 interval bounds, or value count u32 + VByte bytes when compressed; an
/// interval end of 2^32 is stored as u32 0). RI record: id u32, interval count
/// u32, then per interval start u32, end u32, code byte-length u16, code
/// bytes. Linestring record: as APRIL with the cell-id list as the A payload
/// and an empty F payload.
struct ApproxFile {
  std::uint8_t version = 1;
  ApproxKind kind = ApproxKind::April;
  std::uint8_t order = 16;
  bool compressed = false;
  RiSide ri_side = RiSide::R;
  std::uint16_t partitions = 1;
  Mbr map_mbr;

  struct Tile {
    Mbr raster_extent;
    std::vector<ApproxRecord> records;
  };
  std::vector<Tile> tiles;  // size partitions^2

  GridConfig tile_grid(std::size_t tile_index) const;
};

std::vector<std::uint8_t> serialize(const ApproxFile& file);
ApproxFile parse_approx_file(std::span<const std::uint8_t> bytes);

void save_approx_file(const ApproxFile& file, const std::string& path);
ApproxFile load_approx_file(const std::string& path);

struct BuildFileStats {
  std::uint64_t objects = 0;
  std::uint64_t intervals = 0;
  std::uint64_t payload_bytes = 0;
  double build_s = 0.0;
};

/// Rasterizes a whole dataset into an ApproxFile. When map_override is given
/// (and p == 1) the grid extent is the override, which lets two files built
/// over the same map share a grid and be joined later.
ApproxFile build_approx_file(const Dataset& dataset, ApproxKind kind, int order,
                             FillBackend backend, RiSide side, bool compressed,
                             int p, std::optional<Mbr> map_override = std::nullopt,
                             BuildFileStats* stats = nullptr);

/// Join between two datasets using approximations loaded from files instead of
/// rasterizing. Supported for single-partition files on a shared grid extent;
/// APRIL files of different orders go through the mixed-order filter. The
/// datasets supply the exact geometries for refinement.
JoinResult run_join_prebuilt(const Dataset& r, const ApproxFile& rf,
                             const Dataset& s, const ApproxFile& sf,
                             JoinPredicate predicate, const JoinConfig& cfg);

SelectionResult run_selection_prebuilt(const SimplePolygon& query, const Dataset& data,
                                       const ApproxFile& df, const JoinConfig& cfg);

}  // namespace rasterjoin
