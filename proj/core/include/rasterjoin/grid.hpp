#pragma once

#include <cstdint>

#include "rasterjoin/geom.hpp"

namespace rasterjoin {

/// Hilbert index of a cell. Orders above 16 would not fit, see kMaxGridOrder.
using CellId = std::uint32_t;

inline constexpr int kMaxGridOrder = 16;

struct CellCoord {
  std::uint32_t col = 0;
  std::uint32_t row = 0;
  bool operator==(const CellCoord&) const = default;
};

/// A 2^order x 2^order raster over a rectangular extent. Cells are addressed
/// either by (col,row) or by their Hilbert index.
struct GridConfig {
  int order = 0;
  Mbr extent;
  double cell_w = 0.0;
  double cell_h = 0.0;

  std::uint32_t side() const { return 1u << order; }
  std::uint64_t cell_count() const {
    return std::uint64_t(1) << (2 * order);
  }
  bool operator==(const GridConfig&) const = default;
};

/// Grid over the exact extent given. Throws on invalid order or degenerate extent.
GridConfig make_grid(const Mbr& extent, int order);

/// Grid whose extent is the given MBR inflated by a 1e-9 relative slack on the
/// max side, so that points at (xmax,ymax) land in the last cell row/column.
GridConfig grid_for_extent(const Mbr& objects_mbr, int order);

/// (col,row) -> Hilbert index. Canonical orientation: curve starts at (0,0),
/// first quadrant visited is the transposed sub-curve. Throws on out-of-range coords.
CellId hilbert_index(CellCoord c, int order);

/// Inverse of hilbert_index. Throws on out-of-range id.
CellCoord hilbert_coords(CellId id, int order);

/// Floor mapping of a point to its cell; points on an interior grid line map to
/// the upper-right cell. Throws if p lies outside the extent.
CellCoord point_to_cell(const Point& p, const GridConfig& g);

/// Closed rectangle covered by a cell.
Mbr cell_box(CellCoord c, const GridConfig& g);

Point cell_center(CellCoord c, const GridConfig& g);

}  // namespace rasterjoin
