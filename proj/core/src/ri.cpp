#include "rasterjoin/ri.hpp"

#include <algorithm>
#include <stdexcept>

namespace rasterjoin {

std::uint8_t encode_cell(TriClass t, RiSide side) {
  // R: Full=011, Strong=101, Weak=100. XOR with 110 yields the S codes.
  std::uint8_t code;
  switch (t) {
    case TriClass::Full: code = 0b011; break;
    case TriClass::Strong: code = 0b101; break;
    default: code = 0b100; break;
  }
  return side == RiSide::R ? code : static_cast<std::uint8_t>(code ^ kRiXorMask);
}

namespace {

// Appends one 3-bit code at bit position `bit` (MSB-first across bytes).
void pack_code(std::vector<std::uint8_t>& bytes, std::size_t bit, std::uint8_t code) {
  for (int k = 0; k < 3; ++k) {
    const std::size_t pos = bit + k;
    if (pos / 8 >= bytes.size()) bytes.push_back(0);
    if (code & (1u << (2 - k))) bytes[pos / 8] |= 1u << (7 - pos % 8);
  }
}

// Repeating byte image of the 3-bit mask 110, for on-the-fly encoding swaps.
constexpr std::uint8_t kXorBytes[3] = {0b11011011, 0b01101101, 0b10110110};

}  // namespace

RiApprox build_ri(const SimplePolygon& poly, const GridConfig& g, RiSide side) {
  const auto cells = classify_tri(poly, g);
  if (cells.empty()) throw std::invalid_argument("degenerate approximation: no cells");

  RiApprox out;
  out.order = g.order;
  out.side = side;
  std::size_t i = 0;
  while (i < cells.size()) {
    RiInterval iv;
    iv.start = cells[i].first;
    std::size_t bit = 0;
    IntervalBound next = iv.start;
    while (i < cells.size() && cells[i].first == next) {
      pack_code(iv.code, bit, encode_cell(cells[i].second, side));
      bit += 3;
      ++next;
      ++i;
    }
    iv.end = next;
    out.intervals.push_back(std::move(iv));
  }
  return out;
}

bool aligned_and(const RiInterval& x, const RiInterval& y, bool same_encoding) {
  const IntervalBound lo = std::max(x.start, y.start);
  const IntervalBound hi = std::min(x.end, y.end);
  if (lo >= hi) throw std::invalid_argument("aligned_and requires overlapping intervals");

  // The later-starting interval is byte-aligned at the common fragment; the
  // earlier one is truncated to whole bytes and bit-shifted, carrying bits
  // over from the following byte.
  const RiInterval& early = x.start <= y.start ? x : y;
  const RiInterval& late = x.start <= y.start ? y : x;
  const std::size_t bit_offset = static_cast<std::size_t>((lo - early.start) * 3);
  const std::size_t n_bits = static_cast<std::size_t>((hi - lo) * 3);
  const std::size_t n_bytes = (n_bits + 7) / 8;
  const std::size_t skip = bit_offset / 8;
  const unsigned shift = bit_offset % 8;

  for (std::size_t k = 0; k < n_bytes; ++k) {
    std::uint8_t a = static_cast<std::uint8_t>(early.code[skip + k] << shift);
    if (shift != 0 && skip + k + 1 < early.code.size())
      a |= early.code[skip + k + 1] >> (8 - shift);
    if (same_encoding) a ^= kXorBytes[k % 3];
    if (k + 1 == n_bytes) {
      // Pad bits beyond the common fragment must not fake a hit.
      const unsigned valid = n_bits - 8 * k;
      a &= static_cast<std::uint8_t>(0xFFu << (8 - valid));
    }
    if (a & late.code[k]) return true;
  }
  return false;
}

Verdict ri_join(const RiApprox& x, const RiApprox& y) {
  if (x.order != y.order) throw std::invalid_argument("order mismatch");
  const bool same_encoding = x.side == y.side;
  bool overlapped = false;
  std::size_t i = 0, j = 0;
  while (i < x.intervals.size() && j < y.intervals.size()) {
    const RiInterval& xi = x.intervals[i];
    const RiInterval& yj = y.intervals[j];
    if (xi.start < yj.end && yj.start < xi.end) {
      if (aligned_and(xi, yj, same_encoding)) return Verdict::TrueHit;
      overlapped = true;
    }
    if (xi.end <= yj.end) ++i; else ++j;
  }
  return overlapped ? Verdict::Indecisive : Verdict::TrueNegative;
}

bool ri_spans_overlap(const RiApprox& x, const RiApprox& y) {
  std::size_t i = 0, j = 0;
  while (i < x.intervals.size() && j < y.intervals.size()) {
    const RiInterval& xi = x.intervals[i];
    const RiInterval& yj = y.intervals[j];
    if (xi.start < yj.end && yj.start < xi.end) return true;
    if (xi.end <= yj.end) ++i; else ++j;
  }
  return false;
}

}  // namespace rasterjoin
