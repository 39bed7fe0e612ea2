#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rasterjoin/intervals.hpp"

namespace rasterjoin {

/// Delta + variable-byte encoding of a strictly increasing integer sequence.
/// The first value is stored absolutely, the rest as gaps. Each integer is
/// split into 7-bit little-endian groups; the high bit of a byte is the
/// continuation flag (1 = more bytes follow).
struct CompressedList {
  std::vector<std::uint8_t> bytes;
  std::uint32_t count = 0;

  bool operator==(const CompressedList&) const = default;
};

CompressedList delta_vbyte_encode(std::span<const IntervalBound> values);
CompressedList encode_intervals(const IntervalList& list);
CompressedList encode_cells(std::span<const CellId> cells);

/// Streaming cursor over a CompressedList; decodes one value per call so joins
/// can abandon a list early. Throws std::runtime_error on truncated buffers
/// and overlong encodings.
class DeltaDecoder {
 public:
  explicit DeltaDecoder(const CompressedList& list)
      : bytes_(list.bytes.data()), size_(list.bytes.size()), remaining_(list.count) {}

  bool done() const { return remaining_ == 0; }
  IntervalBound next();
  std::size_t bytes_consumed() const { return pos_; }

 private:
  const std::uint8_t* bytes_;
  std::size_t size_;
  std::size_t pos_ = 0;
  std::uint32_t remaining_;
  IntervalBound previous_ = 0;
  bool first_ = true;
};

IntervalList decode_intervals(const CompressedList& list);
std::vector<CellId> decode_cells(const CompressedList& list);

/// join_overlap over two compressed interval lists, decoding on the fly.
/// `bytes_read`, when given, receives the total bytes consumed from both lists.
bool join_overlap_streaming(const CompressedList& x, const CompressedList& y,
                            std::size_t* bytes_read = nullptr);

bool join_containment_streaming(const CompressedList& x, const CompressedList& y);

/// Interval list vs cell-id list (cells as intervals of duration 1).
bool join_overlap_cells_streaming(const CompressedList& intervals,
                                  const CompressedList& cells);

}  // namespace rasterjoin
