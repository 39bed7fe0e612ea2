#include "synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace synthetic {

SimplePolygon random_star_polygon(Rng& rng, Point center, double rmin, double rmax,
                                  int min_vertices, int max_vertices) {
  std::uniform_int_distribution<int> nverts(min_vertices, max_vertices);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> radius(rmin, rmax);
  while (true) {
    const int n = nverts(rng);
    std::vector<double> angles(n);
    for (double& a : angles) a = angle(rng);
    std::sort(angles.begin(), angles.end());
    // Every edge must stay inside its angular wedge, so consecutive angles
    // (including the wrap-around) have to be distinct and less than pi apart;
    // otherwise the ring can self-intersect.
    bool ok = true;
    for (int i = 1; i < n; ++i) {
      const double gap = angles[i] - angles[i - 1];
      if (gap < 1e-4 || gap > 0.95 * M_PI) ok = false;
    }
    if (angles.front() + 2.0 * M_PI - angles.back() > 0.95 * M_PI) ok = false;
    if (!ok) continue;
    std::vector<Point> ring;
    ring.reserve(n);
    for (double a : angles) {
      const double r = radius(rng);
      ring.push_back(Point{center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    try {
      return rasterjoin::make_polygon(std::move(ring));
    } catch (const std::invalid_argument&) {
      continue;  // degenerate draw, retry
    }
  }
}

SimplePolygon random_polygon_in(Rng& rng, const Mbr& area, double rmin, double rmax) {
  std::uniform_real_distribution<double> cx(area.xmin + rmax, area.xmax - rmax);
  std::uniform_real_distribution<double> cy(area.ymin + rmax, area.ymax - rmax);
  return random_star_polygon(rng, Point{cx(rng), cy(rng)}, rmin, rmax);
}

Linestring random_linestring_in(Rng& rng, const Mbr& area, int segments, double step) {
  std::uniform_real_distribution<double> sx(area.xmin, area.xmax);
  std::uniform_real_distribution<double> sy(area.ymin, area.ymax);
  std::uniform_real_distribution<double> turn(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> len(0.3 * step, step);
  while (true) {
    std::vector<Point> pts;
    pts.push_back(Point{sx(rng), sy(rng)});
    for (int i = 0; i < segments; ++i) {
      const double a = turn(rng);
      const double l = len(rng);
      Point next{pts.back().x + l * std::cos(a), pts.back().y + l * std::sin(a)};
      next.x = std::clamp(next.x, area.xmin, area.xmax);
      next.y = std::clamp(next.y, area.ymin, area.ymax);
      if (next.x == pts.back().x && next.y == pts.back().y) continue;
      pts.push_back(next);
    }
    if (pts.size() < 2) continue;
    try {
      return rasterjoin::make_linestring(std::move(pts));
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
}

Dataset random_polygon_dataset(Rng& rng, std::size_t count, const Mbr& area, double rmin,
                               double rmax, std::uint32_t first_id) {
  std::vector<rasterjoin::DatasetObject> objects;
  objects.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    objects.push_back(rasterjoin::DatasetObject{
        first_id + static_cast<std::uint32_t>(i),
        random_polygon_in(rng, area, rmin, rmax)});
  }
  return rasterjoin::make_dataset(std::move(objects));
}

Dataset random_linestring_dataset(Rng& rng, std::size_t count, const Mbr& area,
                                  int segments, double step, std::uint32_t first_id) {
  std::vector<rasterjoin::DatasetObject> objects;
  objects.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    objects.push_back(rasterjoin::DatasetObject{
        first_id + static_cast<std::uint32_t>(i),
        random_linestring_in(rng, area, segments, step)});
  }
  return rasterjoin::make_dataset(std::move(objects));
}

}  // namespace synthetic
