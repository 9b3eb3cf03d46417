#include "qdh/rdh_engine.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

namespace qdh {
namespace {

// 3-bit group -> pair code. Index is the group value; (-1,-1) is unused.
constexpr PairCode kGroupToPair[8] = {
    {1, 1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 0}, {0, 1}, {1, -1}, {1, 0}};

constexpr std::size_t kLengthPrefixBits = 32;
constexpr unsigned kPaddingGroup = 0b100;  // maps to (0,0), no modification

[[maybe_unused]] bool is_pair_component(Level v) { return v >= -1 && v <= 1; }

// Indices of zero-candidate (encoder) or extracting (decoder) blocks in
// raster order, written into `out`; returns the count.
int collect_pairable(const Macroblock& mb, Side side, int out[16]) {
  int n = 0;
  for (int b = 0; b < 16; ++b) {
    const BlockClass cls =
        [&]() {
          try {
            return classify_block(mb.blocks[static_cast<std::size_t>(b)], side);
          } catch (const InvalidMarkedBlock& e) {
            throw e.at_block(b);
          }
        }();
    const BlockClass want =
        side == Side::kEncoder ? BlockClass::kZeroCandidate : BlockClass::kExtracting;
    if (cls == want) out[n++] = b;
  }
  return n;
}

std::int64_t pair_capacity_bits(int candidates) {
  return 3 * (static_cast<std::int64_t>(candidates) / 2);
}

}  // namespace

BlockClass classify_block(const QdctBlock& block, Side side) {
  const Level ac15 = block.ac15();
  if (side == Side::kEncoder) {
    if (ac15 != 0) return BlockClass::kRecoveryShift;
    return block.nonzero_below_ac15() ? BlockClass::kZeroCandidate
                                      : BlockClass::kSkipAllZero;
  }
  if (ac15 < -1 || ac15 > 1) return BlockClass::kRecoveryShift;
  if (block.nonzero_below_ac15()) return BlockClass::kExtracting;
  if (ac15 != 0)
    throw InvalidMarkedBlock("lone AC15 of +-1 in an otherwise zero block");
  return BlockClass::kSkipAllZero;
}

Level shift_nonzero(Level ac15) {
  assert(ac15 != 0);
  return static_cast<Level>(ac15 > 0 ? ac15 + 1 : ac15 - 1);
}

Level unshift(Level ac15) {
  assert(ac15 >= 2 || ac15 <= -2);
  return static_cast<Level>(ac15 > 1 ? ac15 - 1 : ac15 + 1);
}

PairCode map_bits_to_pair(unsigned bits) {
  assert(bits < 8);
  return kGroupToPair[bits];
}

unsigned map_pair_to_bits(PairCode pair) {
  assert(is_pair_component(pair.c1) && is_pair_component(pair.c2));
  if (pair.c1 == -1 && pair.c2 == -1)
    throw InvalidMarkedBlock("coefficient-pair decodes to the unused state");
  for (unsigned g = 0; g < 8; ++g)
    if (kGroupToPair[g] == pair) return g;
  // All nine combinations are covered above.
  assert(false);
  return 0;
}

MacroblockEmbedResult embed_macroblock(const Macroblock& mb, BitReader& bits) {
  assert(mb.embeddable);
  MacroblockEmbedResult result{mb, 0};
  Macroblock& out = result.macroblock;

  int candidates[16];
  const int n = collect_pairable(mb, Side::kEncoder, candidates);

  for (int b = 0; b < 16; ++b) {
    QdctBlock& block = out.blocks[static_cast<std::size_t>(b)];
    if (classify_block(block, Side::kEncoder) == BlockClass::kRecoveryShift)
      block[15] = shift_nonzero(block.ac15());
  }

  for (int i = 0; i + 1 < n; i += 2) {
    if (bits.remaining() < 3)
      throw std::logic_error("bit source exhausted mid-pair; pad the payload");
    const PairCode code = map_bits_to_pair(bits.read_bits(3));
    out.blocks[static_cast<std::size_t>(candidates[i])][15] = code.c1;
    out.blocks[static_cast<std::size_t>(candidates[i + 1])][15] = code.c2;
    result.bits_consumed += 3;
  }
  // An odd leftover candidate keeps its zero AC15.
  return result;
}

MacroblockExtractResult extract_macroblock(const Macroblock& mb) {
  assert(mb.embeddable);
  MacroblockExtractResult result{mb, {}};
  Macroblock& out = result.macroblock;

  int extracting[16];
  const int n = collect_pairable(mb, Side::kDecoder, extracting);

  for (int i = 0; i + 1 < n; i += 2) {
    QdctBlock& first = out.blocks[static_cast<std::size_t>(extracting[i])];
    QdctBlock& second = out.blocks[static_cast<std::size_t>(extracting[i + 1])];
    PairCode code{first.ac15(), second.ac15()};
    try {
      result.bits.append_bits(map_pair_to_bits(code), 3);
    } catch (const InvalidMarkedBlock& e) {
      throw e.at_block(extracting[i]);
    }
    first[15] = 0;
    second[15] = 0;
  }
  if (n % 2 == 1) {
    const int leftover = extracting[n - 1];
    if (out.blocks[static_cast<std::size_t>(leftover)].ac15() != 0)
      throw InvalidMarkedBlock("unpaired extracting coefficient is nonzero")
          .at_block(leftover);
  }

  for (int b = 0; b < 16; ++b) {
    QdctBlock& block = out.blocks[static_cast<std::size_t>(b)];
    if (classify_block(block, Side::kDecoder) == BlockClass::kRecoveryShift)
      block[15] = unshift(block.ac15());
  }
  return result;
}

std::int64_t macroblock_capacity(const Macroblock& mb) {
  if (!mb.embeddable) return 0;
  int candidates[16];
  return pair_capacity_bits(collect_pairable(mb, Side::kEncoder, candidates));
}

std::int64_t capacity(const CoefficientStream& stream) {
  if (stream.marked)
    throw std::invalid_argument("capacity is defined on unmarked streams");
  std::int64_t total = 0;
  for (const auto& frame : stream.frames)
    for (const Macroblock& mb : frame) total += macroblock_capacity(mb);
  return total;
}

StreamEmbedResult embed_stream(const CoefficientStream& stream,
                               std::span<const std::uint8_t> payload) {
  if (stream.marked)
    throw std::invalid_argument("stream is already marked");

  const std::int64_t capacity_bits = capacity(stream);
  const std::int64_t frame_bits =
      static_cast<std::int64_t>(kLengthPrefixBits) +
      8 * static_cast<std::int64_t>(payload.size());
  if (capacity_bits < frame_bits)
    throw CapacityError(capacity_bits, frame_bits);

  // Length-prefixed payload, zero-filled to the next group boundary, then
  // identity-code groups out to full capacity. Every embeddable macroblock
  // is processed even after the payload runs out: an unshifted AC15 of +-1
  // would masquerade as an extracting coefficient.
  BitVector bits;
  bits.append_bits(static_cast<std::uint32_t>(payload.size()),
                   static_cast<int>(kLengthPrefixBits));
  for (std::uint8_t byte : payload) bits.append_byte(byte);
  while (bits.size() % 3 != 0) bits.push_back(false);
  while (static_cast<std::int64_t>(bits.size()) < capacity_bits)
    bits.append_bits(kPaddingGroup, 3);

  StreamEmbedResult result;
  result.stream = stream;
  result.report.capacity_bits = capacity_bits;
  result.report.frame_bits = frame_bits;

  BitReader reader(bits);
  for (std::size_t f = 0; f < result.stream.frames.size(); ++f) {
    FrameEmbedStats stats;
    stats.frame = static_cast<int>(f);
    const std::int64_t frame_start =
        static_cast<std::int64_t>(reader.position());
    for (Macroblock& mb : result.stream.frames[f]) {
      if (!mb.embeddable) continue;
      for (int b = 0; b < 16; ++b) {
        switch (classify_block(mb.blocks[static_cast<std::size_t>(b)],
                               Side::kEncoder)) {
          case BlockClass::kZeroCandidate:
            ++stats.zero_ac15;
            ++stats.embeddable_blocks;
            break;
          case BlockClass::kRecoveryShift:
            ++stats.shifted_blocks;
            ++stats.embeddable_blocks;
            break;
          default:
            break;
        }
      }
      MacroblockEmbedResult embedded = embed_macroblock(mb, reader);
      mb = std::move(embedded.macroblock);
      stats.capacity_bits += static_cast<std::int64_t>(embedded.bits_consumed);
    }
    stats.paired_zero_ac15 = 2 * (stats.capacity_bits / 3);
    const std::int64_t frame_end = static_cast<std::int64_t>(reader.position());
    stats.payload_bits =
        std::max<std::int64_t>(0, std::min(frame_bits, frame_end) -
                                      std::min(frame_bits, frame_start));
    result.report.frames.push_back(stats);
  }
  result.stream.marked = true;
  return result;
}

StreamExtractResult extract_stream(const CoefficientStream& stream) {
  if (!stream.marked)
    throw std::invalid_argument("stream is not marked");

  StreamExtractResult result;
  result.stream = stream;

  BitVector bits;
  for (std::size_t f = 0; f < result.stream.frames.size(); ++f) {
    auto& frame = result.stream.frames[f];
    for (std::size_t m = 0; m < frame.size(); ++m) {
      if (!frame[m].embeddable) continue;
      try {
        MacroblockExtractResult extracted = extract_macroblock(frame[m]);
        frame[m] = std::move(extracted.macroblock);
        for (std::size_t i = 0; i < extracted.bits.size(); ++i)
          bits.push_back(extracted.bits[i]);
      } catch (const InvalidMarkedBlock& e) {
        throw e.at(static_cast<int>(f), static_cast<int>(m));
      }
    }
  }

  if (bits.size() < kLengthPrefixBits)
    throw MalformedPrefix("extracted " + std::to_string(bits.size()) +
                          " bits, need " + std::to_string(kLengthPrefixBits) +
                          " for the length prefix");
  BitReader reader(bits);
  const std::uint64_t declared =
      reader.read_bits(static_cast<int>(kLengthPrefixBits));
  if (kLengthPrefixBits + 8 * declared > bits.size())
    throw MalformedPrefix("declared payload of " + std::to_string(declared) +
                          " bytes exceeds the " +
                          std::to_string(bits.size() - kLengthPrefixBits) +
                          " extractable payload bits");
  result.payload.reserve(declared);
  for (std::uint64_t i = 0; i < declared; ++i)
    result.payload.push_back(static_cast<std::uint8_t>(reader.read_bits(8)));
  // Remaining bits are padding and are discarded.

  result.stream.marked = false;
  return result;
}

}  // namespace qdh
