#include "rasterjoin/codec.hpp"

#include <stdexcept>

namespace rasterjoin {

namespace {

void put_varint(std::vector<std::uint8_t>& out, IntervalBound v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

CompressedList delta_vbyte_encode(std::span<const IntervalBound> values) {
  CompressedList out;
  out.count = static_cast<std::uint32_t>(values.size());
  IntervalBound previous = 0;
  bool first = true;
  for (IntervalBound v : values) {
    if (!first && v <= previous)
      throw std::invalid_argument("values must be strictly increasing");
    put_varint(out.bytes, first ? v : v - previous);
    previous = v;
    first = false;
  }
  return out;
}

CompressedList encode_intervals(const IntervalList& list) {
  return delta_vbyte_encode(list.flat());
}

CompressedList encode_cells(std::span<const CellId> cells) {
  std::vector<IntervalBound> widened(cells.begin(), cells.end());
  return delta_vbyte_encode(widened);
}

IntervalBound DeltaDecoder::next() {
  if (remaining_ == 0) throw std::runtime_error("decode past end of list");
  IntervalBound value = 0;
  unsigned shift = 0;
  std::size_t len = 0;
  while (true) {
    if (pos_ >= size_) throw std::runtime_error("truncated compressed list");
    if (shift > 63) throw std::runtime_error("overlong varint");
    const std::uint8_t byte = bytes_[pos_++];
    ++len;
    value |= IntervalBound(byte & 0x7F) << shift;
    if ((byte & 0x80) == 0) {
      if (len > 1 && byte == 0) throw std::runtime_error("overlong varint");
      break;
    }
    shift += 7;
  }
  --remaining_;
  if (first_) {
    first_ = false;
    previous_ = value;
  } else {
    previous_ += value;
  }
  return previous_;
}

IntervalList decode_intervals(const CompressedList& list) {
  DeltaDecoder d(list);
  std::vector<IntervalBound> flat;
  flat.reserve(list.count);
  while (!d.done()) flat.push_back(d.next());
  return IntervalList::from_flat(std::move(flat));
}

std::vector<CellId> decode_cells(const CompressedList& list) {
  DeltaDecoder d(list);
  std::vector<CellId> cells;
  cells.reserve(list.count);
  while (!d.done()) cells.push_back(static_cast<CellId>(d.next()));
  return cells;
}

namespace {

/// Pulls [start,end) pairs out of a decoder.
struct IntervalCursor {
  DeltaDecoder decoder;
  IntervalBound start = 0, end = 0;

  explicit IntervalCursor(const CompressedList& list) : decoder(list) {}
  bool advance() {
    if (decoder.done()) return false;
    start = decoder.next();
    end = decoder.next();
    return true;
  }
};

}  // namespace

bool join_overlap_streaming(const CompressedList& x, const CompressedList& y,
                            std::size_t* bytes_read) {
  IntervalCursor cx(x), cy(y);
  auto report = [&] {
    if (bytes_read)
      *bytes_read = cx.decoder.bytes_consumed() + cy.decoder.bytes_consumed();
  };
  if (!cx.advance() || !cy.advance()) {
    report();
    return false;
  }
  while (true) {
    if (cx.start < cy.end && cy.start < cx.end) {
      report();
      return true;
    }
    if (cx.end <= cy.end) {
      if (!cx.advance()) break;
    } else {
      if (!cy.advance()) break;
    }
  }
  report();
  return false;
}

bool join_containment_streaming(const CompressedList& x, const CompressedList& y) {
  IntervalCursor cx(x), cy(y);
  if (!cx.advance()) return true;
  if (!cy.advance()) return false;
  while (true) {
    if (cy.end <= cx.start) {
      if (!cy.advance()) return false;
      continue;
    }
    if (cy.start <= cx.start && cx.end <= cy.end) {
      if (!cx.advance()) return true;
      continue;
    }
    return false;
  }
}

bool join_overlap_cells_streaming(const CompressedList& intervals,
                                  const CompressedList& cells) {
  IntervalCursor ci(intervals);
  DeltaDecoder dc(cells);
  if (!ci.advance() || dc.done()) return false;
  IntervalBound c = dc.next();
  while (true) {
    if (ci.start <= c && c < ci.end) return true;
    if (ci.end <= c) {
      if (!ci.advance()) return false;
    } else {
      if (dc.done()) return false;
      c = dc.next();
    }
  }
}

}  // namespace rasterjoin
