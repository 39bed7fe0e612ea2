#include "rasterjoin/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rasterjoin {

namespace {

struct GridWalk {
  const GridConfig& g;
  double inv_w, inv_h;

  explicit GridWalk(const GridConfig& grid)
      : g(grid), inv_w(1.0 / grid.cell_w), inv_h(1.0 / grid.cell_h) {}

  double to_u(double x) const { return (x - g.extent.xmin) * inv_w; }
  double to_v(double y) const { return (y - g.extent.ymin) * inv_h; }
};

std::int64_t clamp_index(std::int64_t v, std::int64_t hi) {
  return std::max<std::int64_t>(0, std::min(v, hi));
}

// Index range of closed unit slabs [k,k+1] touching the closed range [lo,hi].
// A range boundary exactly on an integer touches the slab on both sides.
void slab_range(double lo, double hi, std::int64_t max_index, std::int64_t& first,
                std::int64_t& last) {
  double fl = std::floor(lo);
  first = static_cast<std::int64_t>(fl);
  if (lo == fl) first -= 1;
  last = static_cast<std::int64_t>(std::floor(hi));
  first = clamp_index(first, max_index);
  last = clamp_index(last, max_index);
}

// Supercover traversal of one segment: every cell whose closed box the segment
// touches. Works column slab by column slab; the v-range of the segment within
// each slab gives the touched rows.
void segment_supercover(Point a, Point b, const GridConfig& g, const GridWalk& walk,
                        std::vector<CellId>& out) {
  double ua = walk.to_u(a.x), va = walk.to_v(a.y);
  double ub = walk.to_u(b.x), vb = walk.to_v(b.y);
  if (ua > ub) {
    std::swap(ua, ub);
    std::swap(va, vb);
  }
  const std::int64_t max_index = static_cast<std::int64_t>(g.side()) - 1;
  std::int64_t c_first, c_last;
  slab_range(ua, ub, max_index, c_first, c_last);
  const double du = ub - ua, dv = vb - va;
  for (std::int64_t c = c_first; c <= c_last; ++c) {
    const double lo_u = std::max(ua, static_cast<double>(c));
    const double hi_u = std::min(ub, static_cast<double>(c + 1));
    if (lo_u > hi_u) continue;
    double v_lo, v_hi;
    if (du == 0.0) {
      v_lo = std::min(va, vb);
      v_hi = std::max(va, vb);
    } else {
      const double v0 = va + (lo_u - ua) / du * dv;
      const double v1 = va + (hi_u - ua) / du * dv;
      v_lo = std::min(v0, v1);
      v_hi = std::max(v0, v1);
    }
    std::int64_t r_first, r_last;
    slab_range(v_lo, v_hi, max_index, r_first, r_last);
    for (std::int64_t r = r_first; r <= r_last; ++r) {
      out.push_back(hilbert_index(CellCoord{static_cast<std::uint32_t>(c),
                                            static_cast<std::uint32_t>(r)},
                                  g.order));
    }
  }
}

void require_inside_extent(const Mbr& mbr, const GridConfig& g) {
  if (!(mbr.xmin >= g.extent.xmin && mbr.xmax <= g.extent.xmax &&
        mbr.ymin >= g.extent.ymin && mbr.ymax <= g.extent.ymax))
    throw std::invalid_argument("geometry outside grid extent");
}

std::vector<CellId> supercover_cells(std::span<const Point> points, bool closed,
                                     const GridConfig& g) {
  const GridWalk walk(g);
  std::vector<CellId> cells;
  const std::size_t n = points.size();
  const std::size_t edges = closed ? n : n - 1;
  for (std::size_t i = 0; i < edges; ++i) {
    segment_supercover(points[i], points[(i + 1) % n], g, walk, cells);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

struct Window {
  std::uint32_t c0, r0, c1, r1;  // inclusive

  std::uint32_t cols() const { return c1 - c0 + 1; }
  std::uint32_t rows() const { return r1 - r0 + 1; }
  std::size_t index(std::uint32_t col, std::uint32_t row) const {
    return std::size_t(row - r0) * cols() + (col - c0);
  }
};

Window window_of(const SimplePolygon& poly, const GridConfig& g,
                 std::span<const CellId> partials) {
  const CellCoord lo = point_to_cell(Point{poly.mbr.xmin, poly.mbr.ymin}, g);
  const CellCoord hi = point_to_cell(Point{poly.mbr.xmax, poly.mbr.ymax}, g);
  Window w{lo.col, lo.row, hi.col, hi.row};
  // Supercover can touch one cell beyond the MBR window when an edge lies
  // exactly on the window border.
  for (CellId id : partials) {
    const CellCoord c = hilbert_coords(id, g.order);
    w.c0 = std::min(w.c0, c.col);
    w.r0 = std::min(w.r0, c.row);
    w.c1 = std::max(w.c1, c.col);
    w.r1 = std::max(w.r1, c.row);
  }
  return w;
}

void require_sorted(std::span<const CellId> partials) {
  for (std::size_t i = 1; i < partials.size(); ++i)
    if (partials[i] <= partials[i - 1])
      throw std::invalid_argument("partial cell list must be sorted and unique");
}

// Scanline event points: x-values where the polygon boundary crosses the
// horizontal line at y. Standard half-open vertex rule.
void scanline_events(const SimplePolygon& poly, double y, std::vector<double>& events) {
  events.clear();
  const std::size_t n = poly.ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly.ring[i];
    const Point& b = poly.ring[(i + 1) % n];
    if ((a.y <= y) == (b.y <= y)) continue;
    events.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
  }
  std::sort(events.begin(), events.end());
}

}  // namespace

std::vector<CellId> dda_partial_cells(const SimplePolygon& poly, const GridConfig& g) {
  require_inside_extent(poly.mbr, g);
  return supercover_cells(poly.ring, /*closed=*/true, g);
}

std::vector<CellId> dda_partial_cells(const Linestring& ls, const GridConfig& g) {
  require_inside_extent(ls.mbr, g);
  return supercover_cells(ls.vertices, /*closed=*/false, g);
}

std::vector<CellId> scanline_full_cells(const SimplePolygon& poly, const GridConfig& g,
                                        std::span<const CellId> partials) {
  require_inside_extent(poly.mbr, g);
  require_sorted(partials);
  const Window w = window_of(poly, g, partials);

  // Per-row sorted column lists of the partial cells.
  std::vector<std::vector<std::uint32_t>> partial_cols(w.rows());
  for (CellId id : partials) {
    const CellCoord c = hilbert_coords(id, g.order);
    partial_cols[c.row - w.r0].push_back(c.col);
  }
  for (auto& cols : partial_cols) std::sort(cols.begin(), cols.end());

  std::vector<CellId> full;
  std::vector<double> events;
  for (std::uint32_t row = w.r0; row <= w.r1; ++row) {
    const double yc = g.extent.ymin + (row + 0.5) * g.cell_h;
    scanline_events(poly, yc, events);
    const auto& cols = partial_cols[row - w.r0];
    for (std::size_t k = 0; k + 1 < events.size(); k += 2) {
      const double xa = events[k], xb = events[k + 1];
      // Cells whose center lies strictly between the event pair.
      auto c_lo = static_cast<std::int64_t>(
          std::ceil((xa - g.extent.xmin) / g.cell_w - 0.5));
      auto c_hi = static_cast<std::int64_t>(
          std::floor((xb - g.extent.xmin) / g.cell_w - 0.5));
      while (c_lo <= c_hi &&
             g.extent.xmin + (c_lo + 0.5) * g.cell_w <= xa)
        ++c_lo;
      while (c_hi >= c_lo &&
             g.extent.xmin + (c_hi + 0.5) * g.cell_w >= xb)
        --c_hi;
      c_lo = clamp_index(c_lo, w.c1);
      c_hi = clamp_index(c_hi, w.c1);
      for (std::int64_t c = c_lo; c <= c_hi; ++c) {
        const auto col = static_cast<std::uint32_t>(c);
        if (std::binary_search(cols.begin(), cols.end(), col)) continue;
        full.push_back(hilbert_index(CellCoord{col, row}, g.order));
      }
    }
  }
  std::sort(full.begin(), full.end());
  return full;
}

std::vector<CellId> floodfill_full_cells(const SimplePolygon& poly, const GridConfig& g,
                                         std::span<const CellId> partials,
                                         std::uint64_t* pip_tests) {
  require_inside_extent(poly.mbr, g);
  require_sorted(partials);
  const Window w = window_of(poly, g, partials);

  enum : std::uint8_t { kUnchecked = 0, kPartial, kFull, kEmpty };
  std::vector<std::uint8_t> labels(std::size_t(w.cols()) * w.rows(), kUnchecked);
  for (CellId id : partials) {
    const CellCoord c = hilbert_coords(id, g.order);
    labels[w.index(c.col, c.row)] = kPartial;
  }

  std::uint64_t pips = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;
  std::vector<CellId> full;
  for (std::uint32_t row = w.r0; row <= w.r1; ++row) {
    for (std::uint32_t col = w.c0; col <= w.c1; ++col) {
      if (labels[w.index(col, row)] != kUnchecked) continue;
      // One PiP test decides the whole 4-connected unchecked region.
      ++pips;
      const bool inside =
          point_in_polygon(cell_center(CellCoord{col, row}, g), poly) !=
          PointLocation::Outside;
      const std::uint8_t label = inside ? kFull : kEmpty;
      stack.clear();
      stack.emplace_back(col, row);
      labels[w.index(col, row)] = label;
      while (!stack.empty()) {
        const auto [cc, rr] = stack.back();
        stack.pop_back();
        if (label == kFull)
          full.push_back(hilbert_index(CellCoord{cc, rr}, g.order));
        const std::int64_t neighbors[4][2] = {
            {std::int64_t(cc) - 1, rr}, {std::int64_t(cc) + 1, rr},
            {cc, std::int64_t(rr) - 1}, {cc, std::int64_t(rr) + 1}};
        for (const auto& nb : neighbors) {
          if (nb[0] < w.c0 || nb[0] > w.c1 || nb[1] < w.r0 || nb[1] > w.r1) continue;
          const auto nc = static_cast<std::uint32_t>(nb[0]);
          const auto nr = static_cast<std::uint32_t>(nb[1]);
          if (labels[w.index(nc, nr)] != kUnchecked) continue;
          labels[w.index(nc, nr)] = label;
          stack.emplace_back(nc, nr);
        }
      }
    }
  }
  if (pip_tests) *pip_tests = pips;
  std::sort(full.begin(), full.end());
  return full;
}

double clipped_area(const SimplePolygon& poly, const Mbr& box) {
  // Sutherland-Hodgman against the four half-planes of the box. The ring is
  // normalized to counter-clockwise first so the result area is signed >= 0.
  std::vector<Point> input = poly.ring;
  if (signed_ring_area(input) < 0.0) std::reverse(input.begin(), input.end());

  std::vector<Point> output;
  // inside(p) per half-plane; intersect(a, b) returns the boundary crossing.
  auto clip_pass = [&](auto inside, auto intersect) {
    output.clear();
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& cur = input[i];
      const Point& prev = input[(i + n - 1) % n];
      const bool cur_in = inside(cur), prev_in = inside(prev);
      if (cur_in) {
        if (!prev_in) output.push_back(intersect(prev, cur));
        output.push_back(cur);
      } else if (prev_in) {
        output.push_back(intersect(prev, cur));
      }
    }
    std::swap(input, output);
  };

  auto at_x = [](const Point& a, const Point& b, double x) {
    return Point{x, a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x)};
  };
  auto at_y = [](const Point& a, const Point& b, double y) {
    return Point{a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y), y};
  };
  clip_pass([&](const Point& p) { return p.x >= box.xmin; },
            [&](const Point& a, const Point& b) { return at_x(a, b, box.xmin); });
  if (input.empty()) return 0.0;
  clip_pass([&](const Point& p) { return p.x <= box.xmax; },
            [&](const Point& a, const Point& b) { return at_x(a, b, box.xmax); });
  if (input.empty()) return 0.0;
  clip_pass([&](const Point& p) { return p.y >= box.ymin; },
            [&](const Point& a, const Point& b) { return at_y(a, b, box.ymin); });
  if (input.empty()) return 0.0;
  clip_pass([&](const Point& p) { return p.y <= box.ymax; },
            [&](const Point& a, const Point& b) { return at_y(a, b, box.ymax); });
  if (input.size() < 3) return 0.0;
  return std::max(0.0, signed_ring_area(input));
}

std::vector<std::pair<CellId, TriClass>> classify_tri(const SimplePolygon& poly,
                                                      const GridConfig& g) {
  const std::vector<CellId> boundary = dda_partial_cells(poly, g);
  const std::vector<CellId> interior = scanline_full_cells(poly, g, boundary);

  const double cell_area = g.cell_w * g.cell_h;
  std::vector<std::pair<CellId, TriClass>> out;
  out.reserve(boundary.size() + interior.size());
  // Merge the two sorted id streams; boundary cells get clipped coverage.
  std::size_t bi = 0, ii = 0;
  while (bi < boundary.size() || ii < interior.size()) {
    if (ii >= interior.size() || (bi < boundary.size() && boundary[bi] < interior[ii])) {
      const CellId id = boundary[bi++];
      const double frac = clipped_area(poly, cell_box(hilbert_coords(id, g.order), g)) /
                          cell_area;
      TriClass t = TriClass::Weak;
      if (frac >= 1.0 - 1e-9) t = TriClass::Full;
      else if (frac > 0.5) t = TriClass::Strong;
      out.emplace_back(id, t);
    } else {
      out.emplace_back(interior[ii++], TriClass::Full);
    }
  }
  return out;
}

std::vector<CellId> rasterize_linestring(const Linestring& ls, const GridConfig& g) {
  return dda_partial_cells(ls, g);
}

}  // namespace rasterjoin
