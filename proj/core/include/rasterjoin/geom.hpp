#pragma once

#include <span>
#include <vector>

namespace rasterjoin {

/// Tolerance for collinearity and on-edge tests, in coordinate units.
inline constexpr double kGeomEpsilon = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Segment {
  Point a;
  Point b;
};

struct Mbr {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool valid() const { return xmin <= xmax && ymin <= ymax; }
  bool contains(const Point& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  void expand(const Point& p);
  void expand(const Mbr& other);
  bool operator==(const Mbr&) const = default;

  static Mbr of_points(std::span<const Point> points);
};

enum class MbrPredicate { Intersects, Within };

bool mbr_intersects(const Mbr& a, const Mbr& b);
bool mbr_within(const Mbr& a, const Mbr& b);
bool mbr_relate(const Mbr& a, const Mbr& b, MbrPredicate predicate);

/// One outer ring, implicitly closed. No holes, no self-intersections.
struct SimplePolygon {
  std::vector<Point> ring;
  Mbr mbr;
};

struct Linestring {
  std::vector<Point> vertices;
  Mbr mbr;
};

/// Validates and builds a polygon: finite coordinates, >= 3 distinct vertices,
/// nonzero area. A repeated closing vertex is dropped.
/// Throws std::invalid_argument on degenerate input.
SimplePolygon make_polygon(std::vector<Point> ring);

/// Validates and builds a linestring: >= 2 vertices, consecutive vertices distinct.
Linestring make_linestring(std::vector<Point> vertices);

enum class PointLocation { Inside, Boundary, Outside };

double signed_ring_area(std::span<const Point> ring);
double polygon_area(const SimplePolygon& poly);

/// Ray-casting classification with a horizontal ray; an edge counts as a
/// crossing only when its lower endpoint is strictly below the ray. Points
/// within kGeomEpsilon of the ring are Boundary.
PointLocation point_in_polygon(const Point& p, const SimplePolygon& poly);

/// Closed-segment intersection: true iff the segments share at least one point.
bool segments_intersect(const Segment& s1, const Segment& s2);

/// Closed-set polygon intersection: boundary contact counts.
bool polygons_intersect(const SimplePolygon& r, const SimplePolygon& s);

/// True iff the area of r is contained in the (closed) area of s.
bool polygon_within(const SimplePolygon& r, const SimplePolygon& s);

bool polygon_linestring_intersect(const SimplePolygon& poly, const Linestring& ls);

}  // namespace rasterjoin
