#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "rasterjoin/april.hpp"
#include "rasterjoin/geom.hpp"
#include "rasterjoin/ri.hpp"

namespace rasterjoin {

using Geometry = std::variant<SimplePolygon, Linestring>;

const Mbr& geometry_mbr(const Geometry& g);

struct DatasetObject {
  std::uint32_t id = 0;
  Geometry geometry;
};

struct Dataset {
  std::vector<DatasetObject> objects;
  Mbr mbr;
};

/// Validates unique ids and computes the dataset MBR.
Dataset make_dataset(std::vector<DatasetObject> objects);

struct IdPair {
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  auto operator<=>(const IdPair&) const = default;
};

/// Exactly the pairs whose MBRs satisfy the predicate, via sort + plane sweep
/// on x with an interval check on y. Closed-boundary semantics.
std::vector<IdPair> mbr_join(const Dataset& r, const Dataset& s, MbrPredicate predicate);

struct PartitionTile {
  Mbr rect;                             // tile rectangle in map space
  Mbr raster_extent;                    // MBR union of the member objects
  GridConfig grid;                      // valid iff both member lists non-empty
  std::vector<std::uint32_t> r_members; // indices into r.objects
  std::vector<std::uint32_t> s_members; // indices into s.objects
};

/// p x p disjoint tiles covering the joint map MBR; an object belongs to every
/// tile its MBR intersects, and both datasets share the tiling. The raster
/// area of a tile is the MBR of its members and may exceed the tile itself.
struct PartitionScheme {
  int p = 1;
  Mbr map_mbr;
  std::vector<PartitionTile> tiles;     // row-major, tiles[row * p + col]

  /// Tile owning a point, with closed-left/open-right boundaries; the last
  /// row/column absorbs the map maximum.
  std::uint32_t tile_of_point(double x, double y) const;
};

PartitionScheme partition(const Dataset& r, const Dataset& s, int p, int order = 16);

enum class JoinPredicate { Intersects, Within, PolyLine };
enum class FilterKind { None, Ri, April };

struct JoinConfig {
  int order = 16;
  FillBackend backend = FillBackend::OneStep;
  FilterKind filter = FilterKind::April;
  bool compressed = false;
  int partitions = 1;
  JoinOrder join_order = kDefaultJoinOrder;
  int threads = 1;
};

struct JoinStats {
  std::uint64_t candidates = 0;
  std::uint64_t true_hits = 0;
  std::uint64_t true_negatives = 0;
  std::uint64_t indecisive = 0;
  std::uint64_t refined_accepted = 0;
  double build_s = 0.0;
  double mbr_join_s = 0.0;
  double filter_s = 0.0;
  double refine_s = 0.0;
  double total_s = 0.0;

  std::uint64_t results() const { return true_hits + refined_accepted; }
  void merge(const JoinStats& other);
};

struct JoinResult {
  std::vector<IdPair> pairs;
  JoinStats stats;
};

/// End-to-end join: per tile, build approximations for the members, MBR-join,
/// intermediate filter, and exact refinement of the indecisive pairs. With
/// p > 1 a candidate pair is processed only in the tile that contains the
/// bottom-left corner of the pair's common MBR, so the output has no
/// duplicates. The result set is independent of filter, backend, p and join
/// order. Throws on invalid configurations (e.g. the RI filter for polygon-
/// linestring joins, or compression with RI).
JoinResult run_join(const Dataset& r, const Dataset& s, JoinPredicate predicate,
                    const JoinConfig& cfg);

struct SelectionResult {
  std::vector<std::uint32_t> ids;
  JoinStats stats;
};

/// Selection: rasterizes the query polygon on the dataset's grid, MBR-scans
/// the dataset, filters each candidate and refines the indecisive ones.
/// A query disjoint from the dataset MBR yields an empty result; a query
/// overlapping it but poking outside the grid extent is an error.
SelectionResult run_selection(const SimplePolygon& query, const Dataset& data,
                              const JoinConfig& cfg);

}  // namespace rasterjoin
