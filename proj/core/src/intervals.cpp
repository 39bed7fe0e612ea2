#include "rasterjoin/intervals.hpp"

#include <algorithm>
#include <stdexcept>

namespace rasterjoin {

IntervalList IntervalList::from_flat(std::vector<IntervalBound> flat) {
  if (flat.size() % 2 != 0)
    throw std::invalid_argument("interval list needs an even number of bounds");
  for (std::size_t i = 1; i < flat.size(); ++i) {
    if (flat[i] <= flat[i - 1])
      throw std::invalid_argument("interval bounds must be strictly increasing");
  }
  IntervalList list;
  list.flat_ = std::move(flat);
  return list;
}

void IntervalList::append(IntervalBound start, IntervalBound end) {
  if (start >= end) throw std::invalid_argument("empty interval");
  if (!flat_.empty() && start <= flat_.back())
    throw std::invalid_argument("interval must start after the previous end");
  flat_.push_back(start);
  flat_.push_back(end);
}

void IntervalList::append_merge(IntervalBound start, IntervalBound end) {
  if (start >= end) throw std::invalid_argument("empty interval");
  if (!flat_.empty() && start <= flat_.back()) {
    if (flat_[flat_.size() - 2] > start)
      throw std::invalid_argument("intervals must be appended in start order");
    flat_.back() = std::max(flat_.back(), end);
    return;
  }
  flat_.push_back(start);
  flat_.push_back(end);
}

std::uint64_t IntervalList::covered_cells() const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < size(); ++i) total += end(i) - start(i);
  return total;
}

bool IntervalList::contains(IntervalBound cell) const {
  // The flat sequence is strictly increasing, so the parity of the upper-bound
  // position tells whether the cell falls inside a [start,end) run.
  auto it = std::upper_bound(flat_.begin(), flat_.end(), cell);
  return (it - flat_.begin()) % 2 == 1;
}

std::vector<CellId> IntervalList::cells() const {
  std::vector<CellId> out;
  out.reserve(covered_cells());
  for (std::size_t i = 0; i < size(); ++i)
    for (IntervalBound c = start(i); c < end(i); ++c)
      out.push_back(static_cast<CellId>(c));
  return out;
}

IntervalList cells_to_intervals(std::span<const CellId> cells) {
  IntervalList out;
  if (cells.empty()) return out;
  IntervalBound run_start = cells[0];
  IntervalBound prev = cells[0];
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const IntervalBound c = cells[i];
    if (c <= prev) throw std::invalid_argument("cell ids must be strictly ascending");
    if (c != prev + 1) {
      out.append(run_start, prev + 1);
      run_start = c;
    }
    prev = c;
  }
  out.append(run_start, prev + 1);
  return out;
}

bool join_overlap(const IntervalList& x, const IntervalList& y, std::uint64_t* steps) {
  std::size_t i = 0, j = 0;
  std::uint64_t count = 0;
  while (i < x.size() && j < y.size()) {
    ++count;
    if (x.start(i) < y.end(j) && y.start(j) < x.end(i)) {
      if (steps) *steps = count;
      return true;
    }
    if (x.end(i) <= y.end(j)) ++i; else ++j;
  }
  if (steps) *steps = count;
  return false;
}

bool join_containment(const IntervalList& x, const IntervalList& y, std::uint64_t* steps) {
  std::size_t i = 0, j = 0;
  std::uint64_t count = 0;
  while (i < x.size()) {
    if (j >= y.size()) {
      if (steps) *steps = count;
      return false;
    }
    ++count;
    if (y.end(j) <= x.start(i)) {
      ++j;
      continue;
    }
    if (y.start(j) <= x.start(i) && x.end(i) <= y.end(j)) {
      ++i;
      continue;
    }
    if (steps) *steps = count;
    return false;
  }
  if (steps) *steps = count;
  return true;
}

bool join_overlap_cells(const IntervalList& x, std::span<const CellId> cells,
                        std::uint64_t* steps) {
  std::size_t i = 0, j = 0;
  std::uint64_t count = 0;
  while (i < x.size() && j < cells.size()) {
    ++count;
    const IntervalBound c = cells[j];
    if (x.start(i) <= c && c < x.end(i)) {
      if (steps) *steps = count;
      return true;
    }
    if (x.end(i) <= c) ++i; else ++j;
  }
  if (steps) *steps = count;
  return false;
}

NeighborLabel check_neighbors(CellId c, std::span<const CellId> partials,
                              const IntervalList& f_so_far, const GridConfig& g) {
  const CellCoord coord = hilbert_coords(c, g.order);
  const std::uint32_t side = g.side();
  const std::int64_t col = coord.col, row = coord.row;
  const std::int64_t offsets[4][2] = {{0, 1}, {0, -1}, {-1, 0}, {1, 0}};
  for (const auto& off : offsets) {
    const std::int64_t nc = col + off[0], nr = row + off[1];
    if (nc < 0 || nr < 0 || nc >= side || nr >= side) continue;
    const CellId n = hilbert_index(
        CellCoord{static_cast<std::uint32_t>(nc), static_cast<std::uint32_t>(nr)}, g.order);
    if (n >= c) continue;
    if (std::binary_search(partials.begin(), partials.end(), n)) continue;
    // n precedes c and is not Partial, so its gap has already been typed.
    return f_so_far.contains(n) ? NeighborLabel::Full : NeighborLabel::Empty;
  }
  return NeighborLabel::Unknown;
}

std::pair<IntervalList, IntervalList> one_step_intervalization(
    std::span<const CellId> partials, const SimplePolygon& poly, const GridConfig& g,
    bool use_neighbor_checks, std::uint64_t* pip_tests) {
  if (partials.empty())
    throw std::invalid_argument("one-step intervalization needs a non-empty partial list");

  IntervalList a_list, f_list;
  std::uint64_t pips = 0;
  IntervalBound a_start = partials[0];
  std::size_t i = 0;
  while (i < partials.size()) {
    // Consume the current run of consecutive partial cells.
    IntervalBound run_end = IntervalBound(partials[i]) + 1;
    while (i + 1 < partials.size() && partials[i + 1] == run_end) {
      ++i;
      ++run_end;
    }
    ++i;
    if (i >= partials.size()) {
      a_list.append(a_start, run_end);
      break;
    }
    // Gap [run_end, partials[i]) is uniformly Full or Empty; its first cell
    // decides the label.
    const CellId gap_head = static_cast<CellId>(run_end);
    NeighborLabel label = NeighborLabel::Unknown;
    if (use_neighbor_checks) label = check_neighbors(gap_head, partials, f_list, g);
    if (label == NeighborLabel::Unknown) {
      ++pips;
      const Point center = cell_center(hilbert_coords(gap_head, g.order), g);
      label = point_in_polygon(center, poly) != PointLocation::Outside
                  ? NeighborLabel::Full
                  : NeighborLabel::Empty;
    }
    if (label == NeighborLabel::Full) {
      f_list.append(run_end, partials[i]);
    } else {
      a_list.append(a_start, run_end);
      a_start = partials[i];
    }
  }
  if (pip_tests) *pip_tests = pips;
  return {std::move(a_list), std::move(f_list)};
}

}  // namespace rasterjoin
