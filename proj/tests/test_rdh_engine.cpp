#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdh/rdh_engine.hpp"
#include "support/test_util.hpp"

using qdh::BitReader;
using qdh::BitVector;
using qdh::BlockClass;
using qdh::CoefficientStream;
using qdh::Level;
using qdh::Macroblock;
using qdh::PairCode;
using qdh::QdctBlock;
using qdh::Side;

namespace {

QdctBlock block_of(const std::array<Level, 16>& coeffs) {
  QdctBlock b;
  b.coeffs = coeffs;
  return b;
}

// The four-vector example macroblock: one nonzero AC15, two paired zero
// AC15s, one unpaired zero AC15. Remaining twelve blocks stay all-zero.
Macroblock example_macroblock() {
  Macroblock mb;
  mb.blocks[0] = block_of({19, 0, 0, 8, 8, 4, 0, 0, 0, 0, 0, 0, 0, -1, 0, 1});
  mb.blocks[1] = block_of({-7, 0, 0, 0, 0, 3, 0, 0, 0, -1, 1, 0, 1, -1, 0, 0});
  mb.blocks[2] = block_of({1, 0, -1, 0, 1, 0, 0, -1, 0, -1, 1, 0, 0, 0, 0, 0});
  mb.blocks[3] = block_of({-7, 0, 1, 1, 1, -2, 0, 0, -1, 0, -1, 0, -1, 0, 0, 0});
  return mb;
}

Macroblock example_marked_macroblock() {
  Macroblock mb = example_macroblock();
  mb.blocks[0][15] = 2;
  mb.blocks[1][15] = 1;
  mb.blocks[2][15] = -1;
  return mb;
}

BitVector bits_from(const std::string& text) {
  BitVector bits;
  for (char c : text) {
    if (c == '0' || c == '1') bits.push_back(c == '1');
  }
  return bits;
}

std::string to_string(const BitVector& bits) {
  std::string s;
  for (std::size_t i = 0; i < bits.size(); ++i) s += bits[i] ? '1' : '0';
  return s;
}

}  // namespace

TEST_CASE("classification of the example vectors") {
  const Macroblock mb = example_macroblock();
  CHECK(qdh::classify_block(mb.blocks[0], Side::kEncoder) ==
        BlockClass::kRecoveryShift);
  CHECK(qdh::classify_block(mb.blocks[1], Side::kEncoder) ==
        BlockClass::kZeroCandidate);
  CHECK(qdh::classify_block(mb.blocks[2], Side::kEncoder) ==
        BlockClass::kZeroCandidate);
  CHECK(qdh::classify_block(mb.blocks[3], Side::kEncoder) ==
        BlockClass::kZeroCandidate);
  CHECK(qdh::classify_block(QdctBlock{}, Side::kEncoder) ==
        BlockClass::kSkipAllZero);
  CHECK(qdh::classify_block(QdctBlock{}, Side::kDecoder) ==
        BlockClass::kSkipAllZero);
}

TEST_CASE("decoder classification splits recovery and extracting on |AC15|") {
  QdctBlock b;
  b[0] = 5;
  b[15] = 2;
  CHECK(qdh::classify_block(b, Side::kDecoder) == BlockClass::kRecoveryShift);
  b[15] = -2;
  CHECK(qdh::classify_block(b, Side::kDecoder) == BlockClass::kRecoveryShift);
  for (Level v : {-1, 0, 1}) {
    b[15] = v;
    CHECK(qdh::classify_block(b, Side::kDecoder) == BlockClass::kExtracting);
  }
  // A +-2 AC15 alone is a legal recovery coefficient (original AC15 +-1).
  QdctBlock lone;
  lone[15] = 2;
  CHECK(qdh::classify_block(lone, Side::kDecoder) == BlockClass::kRecoveryShift);
}

TEST_CASE("lone +-1 AC15 in an otherwise zero block is corrupt") {
  QdctBlock b;
  b[15] = 1;
  CHECK_THROWS_AS(qdh::classify_block(b, Side::kDecoder),
                  qdh::InvalidMarkedBlock);
  b[15] = -1;
  CHECK_THROWS_AS(qdh::classify_block(b, Side::kDecoder),
                  qdh::InvalidMarkedBlock);
}

TEST_CASE("shift moves away from zero, unshift moves back") {
  CHECK(qdh::shift_nonzero(1) == 2);
  CHECK(qdh::shift_nonzero(-1) == -2);
  CHECK(qdh::shift_nonzero(5) == 6);
  CHECK(qdh::unshift(2) == 1);
  CHECK(qdh::unshift(-2) == -1);
  for (int v = -100; v <= 100; ++v) {
    if (v == 0) continue;
    CHECK(qdh::unshift(qdh::shift_nonzero(static_cast<Level>(v))) == v);
  }
}

TEST_CASE("bit groups map onto pair codes per the scheme's table") {
  CHECK(qdh::map_bits_to_pair(0b000) == PairCode{1, 1});
  CHECK(qdh::map_bits_to_pair(0b001) == PairCode{-1, 0});
  CHECK(qdh::map_bits_to_pair(0b010) == PairCode{-1, 1});
  CHECK(qdh::map_bits_to_pair(0b011) == PairCode{0, -1});
  CHECK(qdh::map_bits_to_pair(0b100) == PairCode{0, 0});
  CHECK(qdh::map_bits_to_pair(0b101) == PairCode{0, 1});
  CHECK(qdh::map_bits_to_pair(0b110) == PairCode{1, -1});
  CHECK(qdh::map_bits_to_pair(0b111) == PairCode{1, 0});

  CHECK(qdh::map_pair_to_bits({1, -1}) == 0b110);
  CHECK(qdh::map_pair_to_bits({0, 0}) == 0b100);
  for (unsigned g = 0; g < 8; ++g)
    CHECK(qdh::map_pair_to_bits(qdh::map_bits_to_pair(g)) == g);
  CHECK_THROWS_AS(qdh::map_pair_to_bits({-1, -1}), qdh::InvalidMarkedBlock);
}

TEST_CASE("embedding 110 into the example macroblock") {
  const BitVector bits = bits_from("110");
  BitReader reader(bits);
  const auto result = qdh::embed_macroblock(example_macroblock(), reader);
  CHECK(result.bits_consumed == 3);
  CHECK(result.macroblock == example_marked_macroblock());
}

TEST_CASE("extraction restores the example macroblock and returns 110") {
  const auto result = qdh::extract_macroblock(example_marked_macroblock());
  CHECK(to_string(result.bits) == "110");
  CHECK(result.macroblock == example_macroblock());
}

TEST_CASE("seven candidates carry three pairs of 111 011 111") {
  Macroblock mb;
  for (int b = 0; b < 7; ++b) mb.blocks[static_cast<std::size_t>(b)][0] = 9;
  mb.blocks[7][0] = 4;
  mb.blocks[7][15] = 3;  // the lone nonzero AC15

  CHECK(qdh::macroblock_capacity(mb) == 9);

  const BitVector bits = bits_from("111 011 111");
  BitReader reader(bits);
  const auto result = qdh::embed_macroblock(mb, reader);
  CHECK(result.bits_consumed == 9);
  CHECK(result.macroblock.blocks[0][15] == 1);
  CHECK(result.macroblock.blocks[1][15] == 0);
  CHECK(result.macroblock.blocks[2][15] == 0);
  CHECK(result.macroblock.blocks[3][15] == -1);
  CHECK(result.macroblock.blocks[4][15] == 1);
  CHECK(result.macroblock.blocks[5][15] == 0);
  CHECK(result.macroblock.blocks[6][15] == 0);  // unpaired leftover
  CHECK(result.macroblock.blocks[7][15] == 4);  // shifted recovery

  const auto extracted = qdh::extract_macroblock(result.macroblock);
  CHECK(to_string(extracted.bits) == "111011111");
  CHECK(extracted.macroblock == mb);
}

TEST_CASE("an all-zero macroblock consumes nothing") {
  const Macroblock mb;
  BitVector bits = bits_from("101010");
  BitReader reader(bits);
  const auto result = qdh::embed_macroblock(mb, reader);
  CHECK(result.bits_consumed == 0);
  CHECK(result.macroblock == mb);
  CHECK(qdh::macroblock_capacity(mb) == 0);

  const auto extracted = qdh::extract_macroblock(mb);
  CHECK(extracted.bits.empty());
  CHECK(extracted.macroblock == mb);
}

TEST_CASE("a single candidate yields no capacity") {
  Macroblock mb;
  mb.blocks[4][2] = -3;
  CHECK(qdh::macroblock_capacity(mb) == 0);
}

TEST_CASE("extraction rejects a corrupt pair and a nonzero leftover") {
  Macroblock pair_mb;
  pair_mb.blocks[0][0] = 3;
  pair_mb.blocks[0][15] = -1;
  pair_mb.blocks[1][0] = 3;
  pair_mb.blocks[1][15] = -1;
  CHECK_THROWS_AS(qdh::extract_macroblock(pair_mb), qdh::InvalidMarkedBlock);

  Macroblock leftover_mb;
  leftover_mb.blocks[5][0] = 3;
  leftover_mb.blocks[5][15] = 1;
  CHECK_THROWS_AS(qdh::extract_macroblock(leftover_mb),
                  qdh::InvalidMarkedBlock);
}

TEST_CASE("macroblock capacity of a full candidate set is 24 bits") {
  Macroblock mb;
  for (QdctBlock& block : mb.blocks) block[0] = 7;
  CHECK(qdh::macroblock_capacity(mb) == 24);

  CoefficientStream stream;
  stream.mb_cols = 2;
  stream.mb_rows = 2;
  stream.frames = {std::vector<Macroblock>(4, mb)};
  CHECK(qdh::capacity(stream) == 96);
}

TEST_CASE("masked macroblocks contribute nothing and are left alone") {
  Macroblock mb;
  for (QdctBlock& block : mb.blocks) block[0] = 7;
  Macroblock masked = mb;
  masked.embeddable = false;

  CoefficientStream stream;
  stream.mb_cols = 3;
  stream.mb_rows = 1;
  stream.frames = {{mb, masked, mb}};
  CHECK(qdh::capacity(stream) == 48);

  const auto embedded = qdh::embed_stream(stream, {});
  CHECK(embedded.stream.frames[0][1] == masked);
  const auto extracted = qdh::extract_stream(embedded.stream);
  CHECK(extracted.stream == stream);
}

TEST_CASE("empty payload embeds a prefix and extracts to nothing") {
  std::mt19937_64 rng(0x00aa);
  CoefficientStream stream;
  do {
    stream = testutil::random_stream(rng, 8, 8, 2);
  } while (qdh::capacity(stream) < 32);

  const auto embedded = qdh::embed_stream(stream, {});
  CHECK(embedded.report.frame_bits == 32);
  CHECK(embedded.report.capacity_bits == qdh::capacity(stream));
  CHECK(embedded.stream.marked);

  const auto extracted = qdh::extract_stream(embedded.stream);
  CHECK(extracted.payload.empty());
  CHECK(extracted.stream == stream);
}

TEST_CASE("capacity errors carry both numbers") {
  Macroblock mb;
  for (QdctBlock& block : mb.blocks) block[0] = 7;
  CoefficientStream stream;
  stream.mb_cols = 1;
  stream.mb_rows = 1;
  stream.frames = {{mb}};  // capacity 24 bits < 32-bit prefix

  try {
    qdh::embed_stream(stream, std::vector<std::uint8_t>{0xab});
    FAIL("expected CapacityError");
  } catch (const qdh::CapacityError& e) {
    CHECK(e.capacity_bits() == 24);
    CHECK(e.required_bits() == 40);
    CHECK(std::string(e.what()).find("24") != std::string::npos);
    CHECK(std::string(e.what()).find("40") != std::string::npos);
  }
}

TEST_CASE("stream preconditions on the marked flag") {
  CoefficientStream stream;
  stream.mb_cols = 1;
  stream.mb_rows = 1;
  stream.frames = {{Macroblock{}}};

  CHECK_THROWS_AS(qdh::extract_stream(stream), std::invalid_argument);
  stream.marked = true;
  CHECK_THROWS_AS(qdh::embed_stream(stream, {}), std::invalid_argument);
  CHECK_THROWS_AS(qdh::capacity(stream), std::invalid_argument);
}

TEST_CASE("declared length beyond the extractable bits is malformed") {
  Macroblock mb;
  for (QdctBlock& block : mb.blocks) block[0] = 7;
  CoefficientStream stream;
  stream.mb_cols = 2;
  stream.mb_rows = 1;
  stream.frames = {std::vector<Macroblock>(2, mb)};

  auto embedded = qdh::embed_stream(stream, {});
  // Overwrite the first eleven pairs with all-ones groups: the prefix now
  // declares 0xffffffff bytes.
  for (Macroblock& m : embedded.stream.frames[0])
    for (int b = 0; b + 1 < 16; b += 2) {
      m.blocks[static_cast<std::size_t>(b)][15] = 1;      // '111' -> (1,0)
      m.blocks[static_cast<std::size_t>(b + 1)][15] = 0;
    }
  CHECK_THROWS_AS(qdh::extract_stream(embedded.stream), qdh::MalformedPrefix);
}

TEST_CASE("too few extractable bits for a prefix is malformed") {
  Macroblock mb;
  mb.blocks[0][0] = 1;
  mb.blocks[1][0] = 1;  // one pair, 3 bits
  CoefficientStream stream;
  stream.mb_cols = 1;
  stream.mb_rows = 1;
  stream.marked = true;
  stream.frames = {{mb}};
  CHECK_THROWS_AS(qdh::extract_stream(stream), qdh::MalformedPrefix);
}

TEST_CASE("corrupting a marked stream reports coordinates") {
  std::mt19937_64 rng(0xc0de);
  CoefficientStream stream;
  do {
    stream = testutil::random_stream(rng, 4, 4, 2);
  } while (qdh::capacity(stream) < 64);
  auto embedded = qdh::embed_stream(stream, testutil::random_payload(rng, 2));

  // Find an extracting pair and force it to (-1,-1).
  for (std::size_t f = 0; f < embedded.stream.frames.size(); ++f)
    for (std::size_t m = 0; m < embedded.stream.frames[f].size(); ++m) {
      Macroblock& mb = embedded.stream.frames[f][m];
      int found[16];
      int n = 0;
      for (int b = 0; b < 16; ++b) {
        const QdctBlock& block = mb.blocks[static_cast<std::size_t>(b)];
        const Level ac = block.ac15();
        if (ac >= -1 && ac <= 1 && block.nonzero_below_ac15()) found[n++] = b;
      }
      if (n < 2) continue;
      mb.blocks[static_cast<std::size_t>(found[0])][15] = -1;
      mb.blocks[static_cast<std::size_t>(found[1])][15] = -1;
      try {
        qdh::extract_stream(embedded.stream);
        FAIL("expected InvalidMarkedBlock");
      } catch (const qdh::InvalidMarkedBlock& e) {
        CHECK(e.frame() == static_cast<int>(f));
        CHECK(e.macroblock() == static_cast<int>(m));
        CHECK(e.block() == found[0]);
        CHECK(std::string(e.what()).find("frame") != std::string::npos);
      }
      return;
    }
  FAIL("no pair found to corrupt");
}

TEST_CASE("round trip over random streams and payloads") {
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> mask_coin(0, 1);
  int embedded_trials = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const CoefficientStream stream =
        testutil::random_stream(rng, 8, 6, 2, mask_coin(rng) == 1);
    const std::int64_t cap = qdh::capacity(stream);
    if (cap < 32) continue;
    const auto max_bytes = static_cast<std::size_t>((cap - 32) / 8);
    std::uniform_int_distribution<std::size_t> len(0, max_bytes);
    const auto payload = testutil::random_payload(rng, len(rng));

    const auto embedded = qdh::embed_stream(stream, payload);
    CHECK(embedded.report.capacity_bits == cap);
    const auto extracted = qdh::extract_stream(embedded.stream);
    CHECK(extracted.payload == payload);
    CHECK(extracted.stream == stream);
    ++embedded_trials;
  }
  CHECK(embedded_trials > 100);
}

TEST_CASE("embedding only ever moves index 15 by at most one") {
  std::mt19937_64 rng(0x10ca);
  for (int trial = 0; trial < 50; ++trial) {
    const CoefficientStream stream = testutil::random_stream(rng, 6, 6, 1);
    const std::int64_t cap = qdh::capacity(stream);
    if (cap < 32) continue;
    const auto payload =
        testutil::random_payload(rng, static_cast<std::size_t>((cap - 32) / 8));
    const auto embedded = qdh::embed_stream(stream, payload);
    for (std::size_t f = 0; f < stream.frames.size(); ++f)
      for (std::size_t m = 0; m < stream.frames[f].size(); ++m)
        for (int b = 0; b < 16; ++b) {
          const QdctBlock& before =
              stream.frames[f][m].blocks[static_cast<std::size_t>(b)];
          const QdctBlock& after =
              embedded.stream.frames[f][m].blocks[static_cast<std::size_t>(b)];
          for (int i = 0; i < 15; ++i) CHECK(before[i] == after[i]);
          const int diff = std::abs(after[15] - before[15]);
          CHECK(diff <= 1);
          if (before[15] != 0) CHECK(diff == 1);
        }
  }
}

TEST_CASE("a payload that exactly fills capacity consumes every pair") {
  Macroblock mb;
  for (QdctBlock& block : mb.blocks) block[0] = 7;
  CoefficientStream stream;
  stream.mb_cols = 4;
  stream.mb_rows = 4;
  stream.frames = {std::vector<Macroblock>(16, mb)};

  const std::int64_t cap = qdh::capacity(stream);  // 16 MB * 24 bits
  REQUIRE((cap - 32) % 8 == 0);
  std::mt19937_64 rng(0xf111);
  const auto payload =
      testutil::random_payload(rng, static_cast<std::size_t>((cap - 32) / 8));

  const auto result = qdh::embed_stream(stream, payload);
  CHECK(result.report.frame_bits == cap);
  std::int64_t payload_bits = 0;
  for (const auto& fr : result.report.frames) payload_bits += fr.payload_bits;
  CHECK(payload_bits == cap);

  const auto extracted = qdh::extract_stream(result.stream);
  CHECK(extracted.payload == payload);
  CHECK(extracted.stream == stream);
}

TEST_CASE("per-frame accounting adds up") {
  std::mt19937_64 rng(0xacc7);
  CoefficientStream stream;
  do {
    stream = testutil::random_stream(rng, 6, 6, 3);
  } while (qdh::capacity(stream) < 128);

  const auto payload = testutil::random_payload(rng, 4);
  const auto result = qdh::embed_stream(stream, payload);
  CHECK(result.report.frame_bits == 32 + 8 * 4);

  std::int64_t capacity_sum = 0;
  std::int64_t payload_sum = 0;
  for (const auto& fr : result.report.frames) {
    CHECK(fr.capacity_bits == 3 * fr.paired_zero_ac15 / 2);
    CHECK(fr.payload_bits <= fr.capacity_bits);
    CHECK(fr.zero_ac15 + fr.shifted_blocks == fr.embeddable_blocks);
    capacity_sum += fr.capacity_bits;
    payload_sum += fr.payload_bits;
  }
  CHECK(capacity_sum == result.report.capacity_bits);
  CHECK(payload_sum == result.report.frame_bits);
}
