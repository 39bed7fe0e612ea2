#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "rasterjoin/codec.hpp"
#include "rasterjoin/intervals.hpp"
#include "rasterjoin/raster.hpp"
#include "rasterjoin/verdict.hpp"

namespace rasterjoin {

enum class FillBackend { Scanline, FloodFill, OneStep };

/// APRIL approximation of a polygon: the A-list covers every intersected cell,
/// the F-list only the fully covered ones. F is always contained in A.
struct AprilApprox {
  int order = 0;
  IntervalList a_list;
  IntervalList f_list;
};

/// Rasterizes and intervalizes a polygon. The result is backend-independent.
AprilApprox build_april(const SimplePolygon& poly, const GridConfig& g,
                        FillBackend backend, std::uint64_t* pip_tests = nullptr);

enum class JoinPhase { AA, AF, FA };

/// A permutation of the three interval joins; the verdict does not depend on
/// the order, only the cost does.
using JoinOrder = std::array<JoinPhase, 3>;

inline constexpr JoinOrder kDefaultJoinOrder{JoinPhase::AA, JoinPhase::AF,
                                             JoinPhase::FA};

bool valid_join_order(const JoinOrder& order);

/// Intersection filter: disjoint A-lists give TrueNegative; an overlap between
/// one A-list and the other F-list gives TrueHit; otherwise Indecisive.
/// Throws if the approximations have different orders (use mixed_order_filter).
Verdict intersect_filter(const AprilApprox& r, const AprilApprox& s,
                         const JoinOrder& order = kDefaultJoinOrder);

/// Within filter (r within s): AA-join for TrueNegative, then containment of
/// A(r) in F(s) for TrueHit. No FA step, which could only detect s within r.
Verdict within_filter(const AprilApprox& r, const AprilApprox& s);

/// Polygon-linestring filter; linestring cells act as intervals of duration 1.
Verdict linestring_filter(const AprilApprox& poly, std::span<const CellId> ls_cells);

/// Projects an interval list to a coarser order: [start,end) maps to
/// [start>>n, ((end-1)>>n)+1) with n = 2*(from_order-to_order), re-merged.
/// Every source cell's coarse ancestor is covered by the result.
IntervalList scale_down(const IntervalList& list, int from_order, int to_order);

/// Filter between approximations of different orders: the finer A-list is
/// scaled down and joined against the coarse A-list, then against the coarse
/// F-list. Scaled F intervals lose the Full guarantee, so only that one F-join
/// is performed. Equal orders are delegated to intersect_filter.
Verdict mixed_order_filter(const AprilApprox& r, const AprilApprox& s);

/// APRIL with compressed payloads; filters run over the compressed lists
/// directly, decoding during the merge joins.
struct CompressedApril {
  int order = 0;
  CompressedList a_list;
  CompressedList f_list;
};

CompressedApril compress(const AprilApprox& approx);

Verdict intersect_filter(const CompressedApril& r, const CompressedApril& s,
                         const JoinOrder& order = kDefaultJoinOrder);
Verdict within_filter(const CompressedApril& r, const CompressedApril& s);
Verdict linestring_filter(const CompressedApril& poly, const CompressedList& ls_cells);

}  // namespace rasterjoin
