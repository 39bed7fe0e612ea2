#include <doctest.h>

#include <stdexcept>

#include <random>

#include "rasterjoin/codec.hpp"

using namespace rasterjoin;

namespace {

IntervalList random_list(std::mt19937_64& rng, IntervalBound max_id, int max_gap = 50) {
  std::uniform_int_distribution<IntervalBound> gap(1, max_gap);
  std::uniform_int_distribution<IntervalBound> len(1, 30);
  IntervalList out;
  IntervalBound cursor = gap(rng) - 1;
  while (true) {
    const IntervalBound end = cursor + len(rng);
    if (end > max_id) break;
    out.append(cursor, end);
    cursor = end + gap(rng);
  }
  return out;
}

}  // namespace

TEST_CASE("vbyte encoding of single values") {
  const IntervalBound zero[] = {0};
  CHECK(delta_vbyte_encode(zero).bytes == std::vector<std::uint8_t>{0x00});
  const IntervalBound v128[] = {128};
  CHECK(delta_vbyte_encode(v128).bytes == std::vector<std::uint8_t>{0x80, 0x01});
}

TEST_CASE("delta encoding stores the first value absolutely, then gaps") {
  const IntervalBound flat[] = {9, 13, 32, 35};
  const CompressedList c = delta_vbyte_encode(flat);
  CHECK(c.bytes == std::vector<std::uint8_t>{0x09, 0x04, 0x13, 0x03});
  CHECK(c.count == 4);
}

TEST_CASE("decoder rejects malformed buffers") {
  CompressedList truncated;
  truncated.count = 1;
  truncated.bytes = {0x80};  // continuation bit set, nothing follows
  DeltaDecoder d1(truncated);
  CHECK_THROWS_AS(d1.next(), std::runtime_error);

  CompressedList overlong;
  overlong.count = 1;
  overlong.bytes = {0x80, 0x00};  // 0 written in two bytes
  DeltaDecoder d2(overlong);
  CHECK_THROWS_AS(d2.next(), std::runtime_error);

  CompressedList empty;
  DeltaDecoder d3(empty);
  CHECK(d3.done());
  CHECK_THROWS_AS(d3.next(), std::runtime_error);
}

TEST_CASE("roundtrip identity on random interval lists") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 100000; ++trial) {
    const IntervalList list = random_list(rng, 2000);
    CHECK(decode_intervals(encode_intervals(list)) == list);
  }
}

TEST_CASE("an interval ending one past the last order-16 cell survives encoding") {
  IntervalList list;
  list.append((IntervalBound(1) << 32) - 5, IntervalBound(1) << 32);
  CHECK(decode_intervals(encode_intervals(list)) == list);
}

TEST_CASE("streaming joins match the in-memory joins") {
  std::mt19937_64 rng(5678);
  for (int trial = 0; trial < 5000; ++trial) {
    const IntervalList x = random_list(rng, 500);
    const IntervalList y = random_list(rng, 500);
    const CompressedList cx = encode_intervals(x);
    const CompressedList cy = encode_intervals(y);
    CHECK(join_overlap_streaming(cx, cy) == join_overlap(x, y));
    CHECK(join_containment_streaming(cx, cy) == join_containment(x, y));
  }
}

TEST_CASE("early exit stops decoding at the first overlap") {
  // Lists overlap right away; nearly all of both buffers must stay untouched.
  IntervalList x, y;
  for (int i = 0; i < 1000; ++i) x.append(IntervalBound(10 * i), 10 * i + 5);
  for (int i = 0; i < 1000; ++i) y.append(IntervalBound(10 * i + 2), 10 * i + 7);
  const CompressedList cx = encode_intervals(x);
  const CompressedList cy = encode_intervals(y);
  std::size_t bytes_read = 0;
  CHECK(join_overlap_streaming(cx, cy, &bytes_read));
  CHECK(bytes_read <= 8);
  CHECK(bytes_read < cx.bytes.size() + cy.bytes.size());
}

TEST_CASE("streaming cell joins") {
  IntervalList x;
  x.append(4, 8);
  x.append(12, 20);
  const CompressedList cx = encode_intervals(x);
  const std::vector<CellId> hit{9, 13};
  const std::vector<CellId> miss{0, 8, 20, 21};
  CHECK(join_overlap_cells_streaming(cx, encode_cells(hit)));
  CHECK_FALSE(join_overlap_cells_streaming(cx, encode_cells(miss)));
}

TEST_CASE("compression beats 4-byte storage on clustered lists") {
  std::mt19937_64 rng(91);
  int smaller = 0, total = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const IntervalList list = random_list(rng, 1 << 20, 100);
    if (list.empty()) continue;
    const CompressedList c = encode_intervals(list);
    ++total;
    if (c.bytes.size() < list.flat().size() * 4) ++smaller;
  }
  CHECK(smaller == total);
}
