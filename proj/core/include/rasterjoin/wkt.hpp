#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rasterjoin/pipeline.hpp"

namespace rasterjoin {

struct WktParseError : std::runtime_error {
  WktParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what), line_number(line) {}
  std::size_t line_number;
};

struct ParsedWktLine {
  std::optional<std::uint32_t> id;     // from an optional leading "id;" prefix
  std::optional<Geometry> geometry;    // empty when the line was skippable
  std::string skip_reason;             // set when geometry is empty
};

/// Parses one line: optional "id;" prefix, then POLYGON (outer ring only) or
/// LINESTRING. Well-formed but unsupported inputs (MULTIPOLYGON, POINT,
/// polygons with holes, degenerate geometries) yield an empty geometry with a
/// skip reason. Malformed text throws std::invalid_argument.
ParsedWktLine parse_wkt_line(std::string_view line);

std::string to_wkt(const Geometry& geometry);

struct LoadStats {
  std::size_t loaded = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// One geometry per line; blank lines ignored. Objects without an id prefix
/// get consecutive ids starting from the running object count.
/// Throws WktParseError (with the line number) on malformed lines or duplicate
/// ids, and std::runtime_error when the file cannot be opened.
Dataset load_wkt_file(const std::string& path, LoadStats* stats = nullptr);

}  // namespace rasterjoin
