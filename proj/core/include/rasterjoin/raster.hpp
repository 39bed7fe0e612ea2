#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rasterjoin/grid.hpp"

namespace rasterjoin {

enum class CellClass : std::uint8_t { Empty, Partial, Full };

/// Coverage classes for cells that intersect a polygon: Full is 100% covered,
/// Strong more than 50%, Weak a nonzero fraction of at most 50% (boundary-only
/// contact counts as Weak). Empty cells are omitted.
enum class TriClass : std::uint8_t { Weak, Strong, Full };

struct RasterCells {
  std::vector<CellId> partial;
  std::vector<CellId> full;
};

/// Supercover grid traversal: the sorted, deduplicated Hilbert ids of every
/// cell whose closed box intersects an edge of the geometry. Edges through a
/// cell corner or along a grid line touch all adjacent cells.
/// Throws if the geometry MBR is not inside the grid extent.
std::vector<CellId> dda_partial_cells(const SimplePolygon& poly, const GridConfig& g);
std::vector<CellId> dda_partial_cells(const Linestring& ls, const GridConfig& g);

/// Full cells via one horizontal sweep per grid row: polygon/scanline event
/// points are sorted by x and every non-partial cell between an in-out event
/// pair is Full. No point-in-polygon tests are performed.
/// `partials` must be the sorted output of dda_partial_cells for `poly`.
std::vector<CellId> scanline_full_cells(const SimplePolygon& poly, const GridConfig& g,
                                        std::span<const CellId> partials);

/// Full cells via flood fill over the polygon's MBR window: each unlabeled
/// 4-connected region costs one point-in-polygon test at a cell center and is
/// filled as Full or Empty accordingly. `pip_tests`, when given, receives the
/// number of tests performed.
std::vector<CellId> floodfill_full_cells(const SimplePolygon& poly, const GridConfig& g,
                                         std::span<const CellId> partials,
                                         std::uint64_t* pip_tests = nullptr);

/// Classifies every non-empty cell by its exact coverage fraction, computed by
/// polygon-rectangle clipping of the boundary cells; interior cells are Full.
/// Returned list is sorted by cell id.
std::vector<std::pair<CellId, TriClass>> classify_tri(const SimplePolygon& poly,
                                                      const GridConfig& g);

/// Linestrings have zero area, so rasterization yields only boundary cells.
std::vector<CellId> rasterize_linestring(const Linestring& ls, const GridConfig& g);

/// Exact area of poly clipped to a rectangle (Sutherland-Hodgman).
double clipped_area(const SimplePolygon& poly, const Mbr& box);

}  // namespace rasterjoin
