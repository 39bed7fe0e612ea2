// Command line front end: dataset ingestion (WKT), approximation build and
// persistence, join/selection execution with JSON or CSV statistics reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rasterjoin/approx_file.hpp"
#include "rasterjoin/pipeline.hpp"
#include "rasterjoin/wkt.hpp"

using json = nlohmann::json;
using namespace rasterjoin;

namespace {

struct BuildFlags {
  int order = 16;
  std::string backend = "onestep";
  std::string approx = "april";
  std::string side = "R";
  bool compress = false;
  int partitions = 1;
  std::vector<double> extent;  // xmin ymin xmax ymax
};

void add_build_flags(CLI::App* cmd, BuildFlags& flags) {
  cmd->add_option("--order", flags.order, "Grid order N (grid is 2^N x 2^N)")
      ->check(CLI::Range(1, 16));
  cmd->add_option("--backend", flags.backend, "Rasterization backend")
      ->check(CLI::IsMember({"scanline", "floodfill", "onestep"}));
  cmd->add_option("--partitions", flags.partitions, "Partitions per dimension")
      ->check(CLI::Range(1, 64));
  cmd->add_flag("--compress", flags.compress, "Delta + VByte compress interval lists");
  cmd->add_option("--extent", flags.extent,
                  "Map extent as xmin ymin xmax ymax (default: dataset MBR)")
      ->expected(4);
}

FillBackend backend_of(const std::string& name) {
  if (name == "scanline") return FillBackend::Scanline;
  if (name == "floodfill") return FillBackend::FloodFill;
  return FillBackend::OneStep;
}

std::optional<Mbr> extent_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return Mbr{v[0], v[1], v[2], v[3]};
}

Dataset load_dataset(const std::string& path, bool quiet = false) {
  LoadStats stats;
  Dataset d = load_wkt_file(path, &stats);
  if (!quiet && stats.skipped > 0) {
    std::cerr << path << ": skipped " << stats.skipped << " line(s)\n";
    for (const std::string& w : stats.warnings) std::cerr << "  " << w << "\n";
  }
  return d;
}

json stats_to_json(const JoinStats& s) {
  const double n = s.candidates > 0 ? double(s.candidates) : 1.0;
  return json{{"candidates", s.candidates},
              {"true_hits", s.true_hits},
              {"true_negatives", s.true_negatives},
              {"indecisive", s.indecisive},
              {"refined_accepted", s.refined_accepted},
              {"results", s.results()},
              {"true_hit_pct", 100.0 * double(s.true_hits) / n},
              {"true_negative_pct", 100.0 * double(s.true_negatives) / n},
              {"indecisive_pct", 100.0 * double(s.indecisive) / n},
              {"timings_s",
               {{"build", s.build_s},
                {"mbr_join", s.mbr_join_s},
                {"filter", s.filter_s},
                {"refinement", s.refine_s},
                {"total", s.total_s}}}};
}

void print_report(const json& report, const std::string& format, std::ostream& os) {
  if (format == "json") {
    os << report.dump(2) << "\n";
    return;
  }
  // CSV: one header row, one value row, timings flattened.
  json flat = report;
  if (flat.contains("timings_s")) {
    for (const auto& [key, value] : flat["timings_s"].items())
      flat[key + "_s"] = value;
    flat.erase("timings_s");
  }
  std::string header, row;
  for (const auto& [key, value] : flat.items()) {
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += key;
    row += value.is_string() ? value.get<std::string>() : value.dump();
  }
  os << header << "\n" << row << "\n";
}

void write_pairs(const std::vector<IdPair>& pairs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const IdPair& p : pairs) out << p.left << "," << p.right << "\n";
}

int cmd_build(const std::string& input, const BuildFlags& flags, const std::string& out_path) {
  const Dataset dataset = load_dataset(input);
  const ApproxKind kind = flags.approx == "ri" ? ApproxKind::Ri
                          : flags.approx == "cells" ? ApproxKind::LinestringCells
                                                    : ApproxKind::April;
  const bool has_lines =
      std::holds_alternative<Linestring>(dataset.objects.front().geometry);
  const ApproxKind effective =
      has_lines && kind == ApproxKind::April ? ApproxKind::LinestringCells : kind;

  BuildFileStats stats;
  const ApproxFile file = build_approx_file(
      dataset, effective, flags.order, backend_of(flags.backend),
      flags.side == "S" ? RiSide::S : RiSide::R, flags.compress, flags.partitions,
      extent_of(flags.extent), &stats);
  save_approx_file(file, out_path);

  std::cout << "objects: " << stats.objects << "\n"
            << "intervals: " << stats.intervals << "\n"
            << "payload_bytes: " << stats.payload_bytes << "\n"
            << "build_s: " << stats.build_s << "\n"
            << "file: " << out_path << "\n";
  return 0;
}

JoinPredicate predicate_of(const std::string& name) {
  if (name == "within") return JoinPredicate::Within;
  if (name == "polyline") return JoinPredicate::PolyLine;
  return JoinPredicate::Intersects;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Raster-interval spatial join engine"};
  app.require_subcommand(1);

  // --- build ---
  std::string build_input, build_out;
  BuildFlags build_flags;
  std::string build_side = "R";
  CLI::App* build = app.add_subcommand("build", "Rasterize a WKT dataset into a .april file");
  build->add_option("input", build_input, "WKT file, one geometry per line")->required();
  build->add_option("--out", build_out, "Output file")->required();
  build->add_option("--approx", build_flags.approx, "Approximation kind")
      ->check(CLI::IsMember({"april", "ri", "cells"}));
  build->add_option("--side", build_flags.side, "RI encoding side")
      ->check(CLI::IsMember({"R", "S"}));
  add_build_flags(build, build_flags);

  // --- join ---
  std::string left_path, right_path, left_approx, right_approx;
  std::string predicate = "intersects", filter = "april", report_format = "json";
  std::string pairs_out, join_order_name = "aa,af,fa";
  int threads = 1;
  BuildFlags join_flags;
  CLI::App* join = app.add_subcommand("join", "Join two WKT datasets");
  join->add_option("--left", left_path, "Left WKT dataset")->required();
  join->add_option("--right", right_path, "Right WKT dataset")->required();
  join->add_option("--left-approx", left_approx, "Reuse a prebuilt .april file (left)");
  join->add_option("--right-approx", right_approx, "Reuse a prebuilt .april file (right)");
  join->add_option("--predicate", predicate, "Join predicate")
      ->check(CLI::IsMember({"intersects", "within", "polyline"}));
  join->add_option("--filter", filter, "Intermediate filter")
      ->check(CLI::IsMember({"none", "ri", "april"}));
  join->add_option("--report", report_format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  join->add_option("--out", pairs_out, "Write result id pairs to this file");
  join->add_option("--join-order", join_order_name,
                   "Phase order for the APRIL filter, e.g. af,fa,aa");
  join->add_option("--threads", threads, "Worker threads over partitions")
      ->check(CLI::Range(1, 256));
  add_build_flags(join, join_flags);

  // --- select ---
  std::string select_query, select_data, select_approx, select_report = "json";
  std::string select_filter = "april", ids_out;
  BuildFlags select_flags;
  CLI::App* select = app.add_subcommand("select", "Polygon selection over a WKT dataset");
  select->add_option("--query", select_query, "Query polygon as WKT (or @file)")->required();
  select->add_option("--data", select_data, "WKT dataset")->required();
  select->add_option("--data-approx", select_approx, "Reuse a prebuilt .april file");
  select->add_option("--filter", select_filter, "Intermediate filter")
      ->check(CLI::IsMember({"none", "ri", "april"}));
  select->add_option("--report", select_report, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  select->add_option("--out", ids_out, "Write matching ids to this file");
  add_build_flags(select, select_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(build_input, build_flags, build_out);

    if (join->parsed()) {
      JoinConfig cfg;
      cfg.order = join_flags.order;
      cfg.backend = backend_of(join_flags.backend);
      cfg.filter = filter == "none" ? FilterKind::None
                   : filter == "ri" ? FilterKind::Ri
                                    : FilterKind::April;
      cfg.compressed = join_flags.compress;
      cfg.partitions = join_flags.partitions;
      cfg.threads = threads;
      if (join_order_name != "aa,af,fa") {
        auto phase = [](const std::string& p) {
          if (p == "aa") return JoinPhase::AA;
          if (p == "af") return JoinPhase::AF;
          if (p == "fa") return JoinPhase::FA;
          throw std::invalid_argument("bad join order phase: " + p);
        };
        if (join_order_name.size() != 8) throw std::invalid_argument("bad --join-order");
        cfg.join_order = {phase(join_order_name.substr(0, 2)),
                          phase(join_order_name.substr(3, 2)),
                          phase(join_order_name.substr(6, 2))};
      }

      const Dataset left = load_dataset(left_path);
      const Dataset right = load_dataset(right_path);
      const JoinPredicate pred = predicate_of(predicate);

      JoinResult result;
      if (!left_approx.empty() || !right_approx.empty()) {
        if (left_approx.empty() || right_approx.empty())
          throw std::invalid_argument("--left-approx and --right-approx go together");
        const ApproxFile rf = load_approx_file(left_approx);
        const ApproxFile sf = load_approx_file(right_approx);
        result = run_join_prebuilt(left, rf, right, sf, pred, cfg);
      } else {
        result = run_join(left, right, pred, cfg);
      }

      json report = stats_to_json(result.stats);
      report["predicate"] = predicate;
      report["filter"] = filter;
      report["order"] = cfg.order;
      report["partitions"] = cfg.partitions;
      report["compressed"] = cfg.compressed;
      print_report(report, report_format, std::cout);
      if (!pairs_out.empty()) write_pairs(result.pairs, pairs_out);
      return 0;
    }

    if (select->parsed()) {
      std::string query_text = select_query;
      if (!query_text.empty() && query_text[0] == '@') {
        std::ifstream in(query_text.substr(1));
        if (!in) throw std::runtime_error("cannot open query file");
        std::getline(in, query_text);
      }
      const ParsedWktLine parsed = parse_wkt_line(query_text);
      if (!parsed.geometry || !std::holds_alternative<SimplePolygon>(*parsed.geometry))
        throw std::invalid_argument("query must be a POLYGON");
      const SimplePolygon query = std::get<SimplePolygon>(*parsed.geometry);

      const Dataset data = load_dataset(select_data);
      JoinConfig cfg;
      cfg.order = select_flags.order;
      cfg.backend = backend_of(select_flags.backend);
      cfg.filter = select_filter == "none" ? FilterKind::None
                   : select_filter == "ri" ? FilterKind::Ri
                                           : FilterKind::April;
      cfg.compressed = select_flags.compress;

      SelectionResult result;
      if (!select_approx.empty()) {
        const ApproxFile df = load_approx_file(select_approx);
        result = run_selection_prebuilt(query, data, df, cfg);
      } else {
        result = run_selection(query, data, cfg);
      }

      json report = stats_to_json(result.stats);
      report["filter"] = select_filter;
      report["order"] = cfg.order;
      report["matches"] = result.ids.size();
      print_report(report, select_report, std::cout);
      if (!ids_out.empty()) {
        std::ofstream out(ids_out);
        for (auto id : result.ids) out << id << "\n";
      }
      return 0;
    }
  } catch (const WktParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
