#pragma once

#include <cstdint>
#include <vector>

#include "rasterjoin/intervals.hpp"
#include "rasterjoin/raster.hpp"
#include "rasterjoin/verdict.hpp"

namespace rasterjoin {

/// Which of the two complementary 3-bit encodings an approximation uses. The
/// codes are chosen so that (R-code AND S-code) != 0 exactly when the two
/// objects surely intersect in the cell.
enum class RiSide : std::uint8_t { R = 0, S = 1 };

/// 3-bit type code for a cell. R side: Full=011, Strong=101, Weak=100.
/// S side: Full=101, Strong=011, Weak=010.
std::uint8_t encode_cell(TriClass t, RiSide side);

/// XORing a code with this mask swaps it between the R and S encodings.
inline constexpr std::uint8_t kRiXorMask = 0b110;

/// An interval of cells paired with the concatenated 3-bit codes of its cells,
/// packed MSB-first, final byte zero-padded: ceil((end-start)*3/8) bytes.
struct RiInterval {
  IntervalBound start = 0;
  IntervalBound end = 0;
  std::vector<std::uint8_t> code;

  bool operator==(const RiInterval&) const = default;
};

struct RiApprox {
  int order = 0;
  RiSide side = RiSide::R;
  std::vector<RiInterval> intervals;
};

RiApprox build_ri(const SimplePolygon& poly, const GridConfig& g, RiSide side);

/// True iff some aligned 3-bit code pair in the common cell subinterval of x
/// and y ANDs nonzero. Truncates unmatched leading bytes, bit-shifts the code
/// of the earlier-starting interval (with carry), applies the byte-wide XOR
/// mask when both codes use the same encoding, masks the pad bits of the last
/// byte, and ANDs byte-by-byte with early exit.
/// Throws if the intervals do not overlap.
bool aligned_and(const RiInterval& x, const RiInterval& y, bool same_encoding);

/// Merge join over the interval lists: a nonzero aligned AND gives TrueHit,
/// overlapping intervals without one give Indecisive, no overlap at all gives
/// TrueNegative.
Verdict ri_join(const RiApprox& x, const RiApprox& y);

/// True iff the interval spans of x and y share at least one cell.
bool ri_spans_overlap(const RiApprox& x, const RiApprox& y);

}  // namespace rasterjoin
