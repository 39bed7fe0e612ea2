#include "rasterjoin/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace rasterjoin {

GridConfig make_grid(const Mbr& extent, int order) {
  if (order < 1 || order > kMaxGridOrder)
    throw std::invalid_argument("grid order must be in [1,16]");
  if (!extent.valid() || extent.width() <= 0.0 || extent.height() <= 0.0)
    throw std::invalid_argument("grid extent is degenerate");
  GridConfig g;
  g.order = order;
  g.extent = extent;
  const double side = static_cast<double>(std::uint32_t(1) << order);
  g.cell_w = extent.width() / side;
  g.cell_h = extent.height() / side;
  return g;
}

GridConfig grid_for_extent(const Mbr& objects_mbr, int order) {
  if (!objects_mbr.valid() || objects_mbr.width() <= 0.0 || objects_mbr.height() <= 0.0)
    throw std::invalid_argument("objects MBR is degenerate");
  Mbr extent = objects_mbr;
  extent.xmax += objects_mbr.width() * 1e-9;
  extent.ymax += objects_mbr.height() * 1e-9;
  return make_grid(extent, order);
}

namespace {

// Quadrant rotation/reflection step shared by both conversions.
void hilbert_rotate(std::uint32_t s, std::uint32_t& x, std::uint32_t& y,
                    std::uint32_t rx, std::uint32_t ry) {
  if (ry == 0) {
    if (rx == 1) {
      x = s - 1 - x;
      y = s - 1 - y;
    }
    std::swap(x, y);
  }
}

}  // namespace

CellId hilbert_index(CellCoord c, int order) {
  if (order < 1 || order > kMaxGridOrder) throw std::invalid_argument("bad grid order");
  const std::uint32_t side = std::uint32_t(1) << order;
  if (c.col >= side || c.row >= side)
    throw std::invalid_argument("cell coordinate out of range");
  std::uint32_t x = c.col, y = c.row;
  std::uint64_t d = 0;
  for (std::uint32_t s = side >> 1; s > 0; s >>= 1) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += std::uint64_t(s) * s * ((3 * rx) ^ ry);
    hilbert_rotate(s, x, y, rx, ry);
  }
  return static_cast<CellId>(d);
}

CellCoord hilbert_coords(CellId id, int order) {
  if (order < 1 || order > kMaxGridOrder) throw std::invalid_argument("bad grid order");
  const std::uint64_t cells = std::uint64_t(1) << (2 * order);
  if (std::uint64_t(id) >= cells) throw std::invalid_argument("cell id out of range");
  const std::uint32_t side = std::uint32_t(1) << order;
  std::uint32_t x = 0, y = 0;
  std::uint64_t t = id;
  for (std::uint32_t s = 1; s < side; s <<= 1) {
    const std::uint32_t rx = 1 & static_cast<std::uint32_t>(t >> 1);
    const std::uint32_t ry = 1 & static_cast<std::uint32_t>(t ^ rx);
    hilbert_rotate(s, x, y, rx, ry);
    x += s * rx;
    y += s * ry;
    t >>= 2;
  }
  return CellCoord{x, y};
}

CellCoord point_to_cell(const Point& p, const GridConfig& g) {
  if (!g.extent.contains(p)) throw std::invalid_argument("point outside grid extent");
  const std::uint32_t side = g.side();
  auto to_index = [side](double offset, double cell_size) {
    auto idx = static_cast<std::int64_t>(std::floor(offset / cell_size));
    if (idx < 0) idx = 0;
    if (idx >= side) idx = side - 1;
    return static_cast<std::uint32_t>(idx);
  };
  return CellCoord{to_index(p.x - g.extent.xmin, g.cell_w),
                   to_index(p.y - g.extent.ymin, g.cell_h)};
}

Mbr cell_box(CellCoord c, const GridConfig& g) {
  const double x0 = g.extent.xmin + c.col * g.cell_w;
  const double y0 = g.extent.ymin + c.row * g.cell_h;
  return Mbr{x0, y0, x0 + g.cell_w, y0 + g.cell_h};
}

Point cell_center(CellCoord c, const GridConfig& g) {
  return Point{g.extent.xmin + (c.col + 0.5) * g.cell_w,
               g.extent.ymin + (c.row + 0.5) * g.cell_h};
}

}  // namespace rasterjoin
