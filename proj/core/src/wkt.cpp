#include "rasterjoin/wkt.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rasterjoin {

namespace {

struct Scanner {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool match(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!match(c))
      throw std::invalid_argument(std::string("expected '") + c + "' in WKT");
  }
  std::string keyword() {
    skip_ws();
    std::string word;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos])))
      word.push_back(static_cast<char>(std::toupper(text[pos++])));
    return word;
  }
  double number() {
    skip_ws();
    double value = 0.0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) throw std::invalid_argument("expected a number in WKT");
    pos += static_cast<std::size_t>(ptr - begin);
    return value;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
};

std::vector<Point> parse_point_list(Scanner& sc) {
  std::vector<Point> points;
  sc.expect('(');
  while (true) {
    const double x = sc.number();
    const double y = sc.number();
    points.push_back(Point{x, y});
    if (sc.match(',')) continue;
    sc.expect(')');
    break;
  }
  return points;
}

}  // namespace

ParsedWktLine parse_wkt_line(std::string_view line) {
  ParsedWktLine out;
  Scanner sc{line};

  // Optional "id;" prefix.
  const auto semi = line.find(';');
  if (semi != std::string_view::npos) {
    std::uint32_t id = 0;
    const char* begin = line.data();
    auto [ptr, ec] = std::from_chars(begin, begin + semi, id);
    if (ec != std::errc() || ptr != begin + semi)
      throw std::invalid_argument("malformed id prefix");
    out.id = id;
    sc = Scanner{line.substr(semi + 1)};
  }

  const std::string kind = sc.keyword();
  if (kind.empty()) throw std::invalid_argument("missing geometry keyword");

  if (kind == "POLYGON") {
    sc.expect('(');
    std::vector<Point> ring = parse_point_list(sc);
    if (sc.match(',')) {
      out.skip_reason = "polygon with holes";
      return out;
    }
    sc.expect(')');
    if (!sc.at_end()) throw std::invalid_argument("trailing characters after polygon");
    try {
      out.geometry = make_polygon(std::move(ring));
    } catch (const std::invalid_argument& e) {
      out.skip_reason = e.what();
    }
    return out;
  }
  if (kind == "LINESTRING") {
    std::vector<Point> vertices = parse_point_list(sc);
    if (!sc.at_end()) throw std::invalid_argument("trailing characters after linestring");
    try {
      out.geometry = make_linestring(std::move(vertices));
    } catch (const std::invalid_argument& e) {
      out.skip_reason = e.what();
    }
    return out;
  }
  if (kind == "MULTIPOLYGON" || kind == "MULTILINESTRING" || kind == "POINT" ||
      kind == "MULTIPOINT" || kind == "GEOMETRYCOLLECTION") {
    out.skip_reason = "unsupported geometry type " + kind;
    return out;
  }
  throw std::invalid_argument("unknown geometry keyword " + kind);
}

std::string to_wkt(const Geometry& geometry) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* poly = std::get_if<SimplePolygon>(&geometry)) {
    os << "POLYGON ((";
    for (const Point& p : poly->ring) os << p.x << ' ' << p.y << ", ";
    // Close the ring explicitly.
    os << poly->ring.front().x << ' ' << poly->ring.front().y << "))";
  } else {
    const auto& ls = std::get<Linestring>(geometry);
    os << "LINESTRING (";
    for (std::size_t i = 0; i < ls.vertices.size(); ++i) {
      if (i) os << ", ";
      os << ls.vertices[i].x << ' ' << ls.vertices[i].y;
    }
    os << ')';
  }
  return os.str();
}

Dataset load_wkt_file(const std::string& path, LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::vector<DatasetObject> objects;
  LoadStats local;
  std::string line;
  std::size_t line_number = 0;
  std::uint32_t next_id = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    ParsedWktLine parsed;
    try {
      parsed = parse_wkt_line(line);
    } catch (const std::invalid_argument& e) {
      throw WktParseError(line_number, "line " + std::to_string(line_number) + ": " + e.what());
    }
    if (!parsed.geometry) {
      ++local.skipped;
      local.warnings.push_back("line " + std::to_string(line_number) + " skipped: " +
                               parsed.skip_reason);
      continue;
    }
    DatasetObject obj;
    obj.id = parsed.id ? *parsed.id : next_id;
    obj.geometry = std::move(*parsed.geometry);
    next_id = std::max(next_id, obj.id) + 1;
    objects.push_back(std::move(obj));
    ++local.loaded;
  }
  if (stats) *stats = std::move(local);
  if (objects.empty()) throw std::runtime_error(path + " contains no usable geometries");
  try {
    return make_dataset(std::move(objects));
  } catch (const std::invalid_argument& e) {
    throw WktParseError(line_number, std::string(e.what()) + " in " + path);
  }
}

}  // namespace rasterjoin
