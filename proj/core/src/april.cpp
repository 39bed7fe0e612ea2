#include "rasterjoin/april.hpp"

#include <algorithm>
#include <stdexcept>

namespace rasterjoin {

AprilApprox build_april(const SimplePolygon& poly, const GridConfig& g,
                        FillBackend backend, std::uint64_t* pip_tests) {
  const std::vector<CellId> partials = dda_partial_cells(poly, g);
  AprilApprox out;
  out.order = g.order;
  if (backend == FillBackend::OneStep) {
    auto [a, f] = one_step_intervalization(partials, poly, g, true, pip_tests);
    out.a_list = std::move(a);
    out.f_list = std::move(f);
  } else {
    std::vector<CellId> full =
        backend == FillBackend::Scanline
            ? scanline_full_cells(poly, g, partials)
            : floodfill_full_cells(poly, g, partials, pip_tests);
    std::vector<CellId> all;
    all.reserve(partials.size() + full.size());
    std::merge(partials.begin(), partials.end(), full.begin(), full.end(),
               std::back_inserter(all));
    out.a_list = cells_to_intervals(all);
    out.f_list = cells_to_intervals(full);
  }
  if (out.a_list.empty())
    throw std::invalid_argument("degenerate approximation: empty A-list");
  return out;
}

bool valid_join_order(const JoinOrder& order) {
  bool seen[3] = {false, false, false};
  for (JoinPhase p : order) seen[static_cast<int>(p)] = true;
  return seen[0] && seen[1] && seen[2];
}

Verdict intersect_filter(const AprilApprox& r, const AprilApprox& s,
                         const JoinOrder& order) {
  if (r.order != s.order)
    throw std::invalid_argument("order mismatch: use mixed_order_filter");
  if (!valid_join_order(order))
    throw std::invalid_argument("join order must use each phase exactly once");
  for (JoinPhase phase : order) {
    switch (phase) {
      case JoinPhase::AA:
        if (!join_overlap(r.a_list, s.a_list)) return Verdict::TrueNegative;
        break;
      case JoinPhase::AF:
        if (join_overlap(r.a_list, s.f_list)) return Verdict::TrueHit;
        break;
      case JoinPhase::FA:
        if (join_overlap(r.f_list, s.a_list)) return Verdict::TrueHit;
        break;
    }
  }
  return Verdict::Indecisive;
}

Verdict within_filter(const AprilApprox& r, const AprilApprox& s) {
  if (r.order != s.order) throw std::invalid_argument("order mismatch");
  if (!join_overlap(r.a_list, s.a_list)) return Verdict::TrueNegative;
  if (join_containment(r.a_list, s.f_list)) return Verdict::TrueHit;
  return Verdict::Indecisive;
}

Verdict linestring_filter(const AprilApprox& poly, std::span<const CellId> ls_cells) {
  if (!join_overlap_cells(poly.a_list, ls_cells)) return Verdict::TrueNegative;
  if (join_overlap_cells(poly.f_list, ls_cells)) return Verdict::TrueHit;
  return Verdict::Indecisive;
}

IntervalList scale_down(const IntervalList& list, int from_order, int to_order) {
  if (from_order <= to_order)
    throw std::invalid_argument("scale_down needs a strictly coarser target order");
  const int shift = 2 * (from_order - to_order);
  IntervalList out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const IntervalBound start = list.start(i) >> shift;
    const IntervalBound end = ((list.end(i) - 1) >> shift) + 1;
    out.append_merge(start, end);
  }
  return out;
}

Verdict mixed_order_filter(const AprilApprox& r, const AprilApprox& s) {
  if (r.order == s.order) return intersect_filter(r, s);
  const AprilApprox& fine = r.order > s.order ? r : s;
  const AprilApprox& coarse = r.order > s.order ? s : r;
  const IntervalList scaled_a = scale_down(fine.a_list, fine.order, coarse.order);
  if (!join_overlap(scaled_a, coarse.a_list)) return Verdict::TrueNegative;
  // Scaled F intervals lose the Full guarantee, so only the coarse F-list can
  // certify a hit.
  if (join_overlap(scaled_a, coarse.f_list)) return Verdict::TrueHit;
  return Verdict::Indecisive;
}

CompressedApril compress(const AprilApprox& approx) {
  CompressedApril out;
  out.order = approx.order;
  out.a_list = encode_intervals(approx.a_list);
  out.f_list = encode_intervals(approx.f_list);
  return out;
}

Verdict intersect_filter(const CompressedApril& r, const CompressedApril& s,
                         const JoinOrder& order) {
  if (r.order != s.order) throw std::invalid_argument("order mismatch");
  if (!valid_join_order(order))
    throw std::invalid_argument("join order must use each phase exactly once");
  for (JoinPhase phase : order) {
    switch (phase) {
      case JoinPhase::AA:
        if (!join_overlap_streaming(r.a_list, s.a_list)) return Verdict::TrueNegative;
        break;
      case JoinPhase::AF:
        if (join_overlap_streaming(r.a_list, s.f_list)) return Verdict::TrueHit;
        break;
      case JoinPhase::FA:
        if (join_overlap_streaming(r.f_list, s.a_list)) return Verdict::TrueHit;
        break;
    }
  }
  return Verdict::Indecisive;
}

Verdict within_filter(const CompressedApril& r, const CompressedApril& s) {
  if (r.order != s.order) throw std::invalid_argument("order mismatch");
  if (!join_overlap_streaming(r.a_list, s.a_list)) return Verdict::TrueNegative;
  if (join_containment_streaming(r.a_list, s.f_list)) return Verdict::TrueHit;
  return Verdict::Indecisive;
}

Verdict linestring_filter(const CompressedApril& poly, const CompressedList& ls_cells) {
  if (!join_overlap_cells_streaming(poly.a_list, ls_cells)) return Verdict::TrueNegative;
  if (join_overlap_cells_streaming(poly.f_list, ls_cells)) return Verdict::TrueHit;
  return Verdict::Indecisive;
}

}  // namespace rasterjoin
