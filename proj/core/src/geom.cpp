#include "rasterjoin/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rasterjoin {

void Mbr::expand(const Point& p) {
  xmin = std::min(xmin, p.x);
  ymin = std::min(ymin, p.y);
  xmax = std::max(xmax, p.x);
  ymax = std::max(ymax, p.y);
}

void Mbr::expand(const Mbr& other) {
  xmin = std::min(xmin, other.xmin);
  ymin = std::min(ymin, other.ymin);
  xmax = std::max(xmax, other.xmax);
  ymax = std::max(ymax, other.ymax);
}

Mbr Mbr::of_points(std::span<const Point> points) {
  Mbr box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& p : points) box.expand(p);
  return box;
}

bool mbr_intersects(const Mbr& a, const Mbr& b) {
  return a.xmin <= b.xmax && b.xmin <= a.xmax && a.ymin <= b.ymax && b.ymin <= a.ymax;
}

bool mbr_within(const Mbr& a, const Mbr& b) {
  return a.xmin >= b.xmin && a.xmax <= b.xmax && a.ymin >= b.ymin && a.ymax <= b.ymax;
}

bool mbr_relate(const Mbr& a, const Mbr& b, MbrPredicate predicate) {
  return predicate == MbrPredicate::Intersects ? mbr_intersects(a, b) : mbr_within(a, b);
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist_sq_point_segment(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len_sq = dx * dx + dy * dy;
  double t = 0.0;
  if (len_sq > 0.0) {
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double px = a.x + t * dx - p.x;
  const double py = a.y + t * dy - p.y;
  return px * px + py * py;
}

bool point_on_segment(const Point& p, const Point& a, const Point& b) {
  return dist_sq_point_segment(p, a, b) <= kGeomEpsilon * kGeomEpsilon;
}

// Strict interior crossing of two segments: orientation signs opposite on both.
bool segments_cross_properly(const Segment& s1, const Segment& s2) {
  const double d1 = cross(s2.a, s2.b, s1.a);
  const double d2 = cross(s2.a, s2.b, s1.b);
  const double d3 = cross(s1.a, s1.b, s2.a);
  const double d4 = cross(s1.a, s1.b, s2.b);
  const double e = kGeomEpsilon;
  const bool opposite12 = (d1 > e && d2 < -e) || (d1 < -e && d2 > e);
  const bool opposite34 = (d3 > e && d4 < -e) || (d3 < -e && d4 > e);
  return opposite12 && opposite34;
}

}  // namespace

SimplePolygon make_polygon(std::vector<Point> ring) {
  for (const Point& p : ring) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("polygon has non-finite coordinates");
  }
  // Drop repeated consecutive vertices and a repeated closing vertex.
  std::vector<Point> cleaned;
  cleaned.reserve(ring.size());
  for (const Point& p : ring) {
    if (!cleaned.empty() && cleaned.back().x == p.x && cleaned.back().y == p.y) continue;
    cleaned.push_back(p);
  }
  while (cleaned.size() > 1 && cleaned.front().x == cleaned.back().x &&
         cleaned.front().y == cleaned.back().y) {
    cleaned.pop_back();
  }
  if (cleaned.size() < 3) throw std::invalid_argument("polygon needs >= 3 distinct vertices");
  if (!(std::abs(signed_ring_area(cleaned)) > 0.0))
    throw std::invalid_argument("polygon has zero area");

  SimplePolygon poly;
  poly.mbr = Mbr::of_points(cleaned);
  poly.ring = std::move(cleaned);
  return poly;
}

Linestring make_linestring(std::vector<Point> vertices) {
  for (const Point& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("linestring has non-finite coordinates");
  }
  if (vertices.size() < 2) throw std::invalid_argument("linestring needs >= 2 vertices");
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i].x == vertices[i - 1].x && vertices[i].y == vertices[i - 1].y)
      throw std::invalid_argument("linestring has repeated consecutive vertices");
  }
  Linestring ls;
  ls.mbr = Mbr::of_points(vertices);
  ls.vertices = std::move(vertices);
  return ls;
}

double signed_ring_area(std::span<const Point> ring) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % ring.size()];
    sum += a.x * b.y - b.x * a.y;
  }
  return 0.5 * sum;
}

double polygon_area(const SimplePolygon& poly) {
  return std::abs(signed_ring_area(poly.ring));
}

PointLocation point_in_polygon(const Point& p, const SimplePolygon& poly) {
  const std::size_t n = poly.ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_on_segment(p, poly.ring[i], poly.ring[(i + 1) % n]))
      return PointLocation::Boundary;
  }
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly.ring[i];
    const Point& b = poly.ring[(i + 1) % n];
    const double lo = std::min(a.y, b.y);
    const double hi = std::max(a.y, b.y);
    // Lower endpoint strictly below the ray; edges tangent from above do not count.
    if (lo < p.y && hi >= p.y) {
      const double x_at_ray = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x_at_ray > p.x) inside = !inside;
    }
  }
  return inside ? PointLocation::Inside : PointLocation::Outside;
}

bool segments_intersect(const Segment& s1, const Segment& s2) {
  if (segments_cross_properly(s1, s2)) return true;
  return point_on_segment(s1.a, s2.a, s2.b) || point_on_segment(s1.b, s2.a, s2.b) ||
         point_on_segment(s2.a, s1.a, s1.b) || point_on_segment(s2.b, s1.a, s1.b);
}

namespace {

bool any_edges_intersect(const SimplePolygon& r, const SimplePolygon& s) {
  const std::size_t nr = r.ring.size(), ns = s.ring.size();
  for (std::size_t i = 0; i < nr; ++i) {
    const Segment er{r.ring[i], r.ring[(i + 1) % nr]};
    for (std::size_t j = 0; j < ns; ++j) {
      const Segment es{s.ring[j], s.ring[(j + 1) % ns]};
      if (segments_intersect(er, es)) return true;
    }
  }
  return false;
}

bool any_edges_cross_properly(const SimplePolygon& r, const SimplePolygon& s) {
  const std::size_t nr = r.ring.size(), ns = s.ring.size();
  for (std::size_t i = 0; i < nr; ++i) {
    const Segment er{r.ring[i], r.ring[(i + 1) % nr]};
    for (std::size_t j = 0; j < ns; ++j) {
      const Segment es{s.ring[j], s.ring[(j + 1) % ns]};
      if (segments_cross_properly(er, es)) return true;
    }
  }
  return false;
}

}  // namespace

bool polygons_intersect(const SimplePolygon& r, const SimplePolygon& s) {
  if (!mbr_intersects(r.mbr, s.mbr)) return false;
  if (any_edges_intersect(r, s)) return true;
  // No boundary contact: containment is the only remaining possibility.
  for (const Point& v : r.ring)
    if (point_in_polygon(v, s) != PointLocation::Outside) return true;
  for (const Point& v : s.ring)
    if (point_in_polygon(v, r) != PointLocation::Outside) return true;
  return false;
}

bool polygon_within(const SimplePolygon& r, const SimplePolygon& s) {
  if (!mbr_within(r.mbr, s.mbr)) return false;
  // Touching boundaries are allowed under closed-set semantics, a transversal
  // crossing is not.
  if (any_edges_cross_properly(r, s)) return false;
  for (const Point& v : r.ring)
    if (point_in_polygon(v, s) == PointLocation::Outside) return false;
  const std::size_t n = r.ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = r.ring[i];
    const Point& b = r.ring[(i + 1) % n];
    const Point mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    if (point_in_polygon(mid, s) == PointLocation::Outside) return false;
  }
  return true;
}

bool polygon_linestring_intersect(const SimplePolygon& poly, const Linestring& ls) {
  if (!mbr_intersects(poly.mbr, ls.mbr)) return false;
  const std::size_t n = poly.ring.size();
  for (std::size_t i = 0; i + 1 < ls.vertices.size(); ++i) {
    const Segment seg{ls.vertices[i], ls.vertices[i + 1]};
    for (std::size_t j = 0; j < n; ++j) {
      const Segment edge{poly.ring[j], poly.ring[(j + 1) % n]};
      if (segments_intersect(seg, edge)) return true;
    }
  }
  for (const Point& v : ls.vertices)
    if (point_in_polygon(v, poly) != PointLocation::Outside) return true;
  return false;
}

}  // namespace rasterjoin
