#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rasterjoin/grid.hpp"

namespace rasterjoin {

/// Interval endpoints are 64-bit: an interval covering the last cell of an
/// order-16 grid ends at 2^32, one past the largest CellId.
using IntervalBound = std::uint64_t;

/// Sorted, pairwise disjoint, non-adjacent half-open [start,end) runs of cell
/// ids, stored flat: entry 2i is start_i, entry 2i+1 is end_i. The flat
/// sequence is strictly increasing.
class IntervalList {
 public:
  IntervalList() = default;

  /// Validates the invariants; throws std::invalid_argument if violated.
  static IntervalList from_flat(std::vector<IntervalBound> flat);

  /// Appends an interval that must start strictly after the current last end.
  void append(IntervalBound start, IntervalBound end);

  /// Appends an interval, coalescing it with the last one when they overlap
  /// or are adjacent.
  void append_merge(IntervalBound start, IntervalBound end);

  std::size_t size() const { return flat_.size() / 2; }
  bool empty() const { return flat_.empty(); }
  IntervalBound start(std::size_t i) const { return flat_[2 * i]; }
  IntervalBound end(std::size_t i) const { return flat_[2 * i + 1]; }
  const std::vector<IntervalBound>& flat() const { return flat_; }

  std::uint64_t covered_cells() const;
  bool contains(IntervalBound cell) const;
  std::vector<CellId> cells() const;

  bool operator==(const IntervalList&) const = default;

 private:
  std::vector<IntervalBound> flat_;
};

/// Merges maximal runs of consecutive ids into intervals.
/// Input must be strictly ascending; throws otherwise.
IntervalList cells_to_intervals(std::span<const CellId> cells);

/// True iff some interval of x overlaps some interval of y. Single merge pass,
/// early exit; `steps`, when given, receives the number of loop iterations.
bool join_overlap(const IntervalList& x, const IntervalList& y,
                  std::uint64_t* steps = nullptr);

/// True iff every interval of x is contained in a single interval of y.
bool join_containment(const IntervalList& x, const IntervalList& y,
                      std::uint64_t* steps = nullptr);

/// Merge join between an interval list and a sorted cell-id list, each cell
/// treated as an interval of duration 1. Returns true on first common cell.
bool join_overlap_cells(const IntervalList& x, std::span<const CellId> cells,
                        std::uint64_t* steps = nullptr);

enum class NeighborLabel { Full, Empty, Unknown };

/// Examines the 4-neighbors of c that have smaller Hilbert ids. If one of them
/// is neither Partial (binary search on `partials`) nor inside `f_so_far`, the
/// gap starting at c is Empty; if one lies in `f_so_far`, it is Full. When all
/// qualifying neighbors are Partial (or none qualify), returns Unknown.
NeighborLabel check_neighbors(CellId c, std::span<const CellId> partials,
                              const IntervalList& f_so_far, const GridConfig& g);

/// Builds the A- and F-interval lists directly from the sorted Partial cell
/// list: gaps between nonconsecutive ids are typed by their first cell, via
/// check_neighbors and, failing that, a point-in-polygon test at the cell
/// center. Performs at most |partials|-1 PiP tests; `pip_tests`, when given,
/// receives the count. Throws on an empty partial list.
std::pair<IntervalList, IntervalList> one_step_intervalization(
    std::span<const CellId> partials, const SimplePolygon& poly,
    const GridConfig& g, bool use_neighbor_checks = true,
    std::uint64_t* pip_tests = nullptr);

}  // namespace rasterjoin
