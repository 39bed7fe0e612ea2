#pragma once

// Deterministic synthetic geometry for tests and the acceptance suite.

#include <cstdint>
#include <random>
#include <vector>

#include "rasterjoin/geom.hpp"
#include "rasterjoin/pipeline.hpp"

namespace synthetic {

using rasterjoin::Dataset;
using rasterjoin::Linestring;
using rasterjoin::Mbr;
using rasterjoin::Point;
using rasterjoin::SimplePolygon;

using Rng = std::mt19937_64;

/// Star-shaped polygon around `center`: sorted random angles, random radii in
/// [rmin, rmax]. Always simple (no self-intersections).
SimplePolygon random_star_polygon(Rng& rng, Point center, double rmin, double rmax,
                                  int min_vertices = 5, int max_vertices = 12);

/// Polygon with its center placed uniformly inside `area` (shrunk so the
/// whole polygon stays inside).
SimplePolygon random_polygon_in(Rng& rng, const Mbr& area, double rmin, double rmax);

/// Random-walk linestring clamped to `area`.
Linestring random_linestring_in(Rng& rng, const Mbr& area, int segments, double step);

Dataset random_polygon_dataset(Rng& rng, std::size_t count, const Mbr& area, double rmin,
                               double rmax, std::uint32_t first_id = 0);

Dataset random_linestring_dataset(Rng& rng, std::size_t count, const Mbr& area,
                                  int segments, double step, std::uint32_t first_id = 0);

}  // namespace synthetic
