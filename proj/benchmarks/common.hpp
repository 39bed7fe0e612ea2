#pragma once

// Small deterministic polygon generator for the benchmarks.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rasterjoin/geom.hpp"
#include "rasterjoin/grid.hpp"

namespace bench {

inline std::vector<rasterjoin::SimplePolygon> star_polygons(std::uint64_t seed, int count,
                                                            double map, double rmin,
                                                            double rmax) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(rmax + 1.0, map - rmax - 1.0);
  std::uniform_real_distribution<double> angle_jitter(0.05, 0.55);
  std::uniform_real_distribution<double> radius(rmin, rmax);
  std::vector<rasterjoin::SimplePolygon> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const rasterjoin::Point c{center(rng), center(rng)};
    std::vector<rasterjoin::Point> ring;
    // Angles spaced below pi keep the ring simple.
    double a = 0.0;
    while (a < 2.0 * M_PI - 0.6) {
      const double r = radius(rng);
      ring.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
      a += angle_jitter(rng) * 2.0;
    }
    out.push_back(rasterjoin::make_polygon(std::move(ring)));
  }
  return out;
}

inline rasterjoin::GridConfig grid_over(const std::vector<rasterjoin::SimplePolygon>& polys,
                                        int order) {
  rasterjoin::Mbr u = polys.front().mbr;
  for (const auto& p : polys) u.expand(p.mbr);
  return rasterjoin::grid_for_extent(u, order);
}

}  // namespace bench
