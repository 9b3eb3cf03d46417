#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qdh/bitstream.hpp"
#include "qdh/block_model.hpp"
#include "qdh/errors.hpp"

namespace qdh {

enum class Side { kEncoder, kDecoder };

enum class BlockClass {
  kSkipAllZero,    // every coefficient zero; untouched on both sides
  kZeroCandidate,  // encoder: AC15 == 0 and some index 0..14 nonzero
  kRecoveryShift,  // encoder: AC15 != 0; decoder: |AC15| >= 2
  kExtracting,     // decoder: AC15 in {-1,0,1} and some index 0..14 nonzero
};

// Total over valid blocks. On the decoder side an AC15 of +-1 sitting in an
// otherwise all-zero block cannot come from a conformant embedder and throws
// InvalidMarkedBlock.
BlockClass classify_block(const QdctBlock& block, Side side);

// Move a nonzero AC15 one step away from zero to vacate the +-1 bins.
// Pre: ac15 != 0.
Level shift_nonzero(Level ac15);

// Inverse of shift_nonzero. Pre: |ac15| >= 2.
Level unshift(Level ac15);

// One modified coefficient-pair. Components are in {-1,0,1}; (-1,-1) is the
// unused ninth state and never appears in a marked stream.
struct PairCode {
  Level c1 = 0;
  Level c2 = 0;

  friend bool operator==(const PairCode&, const PairCode&) = default;
};

// 3-bit group (MSB-first, 0..7) -> pair code.
PairCode map_bits_to_pair(unsigned bits);

// Exact inverse of map_bits_to_pair. Throws InvalidMarkedBlock on (-1,-1).
unsigned map_pair_to_bits(PairCode pair);

struct MacroblockEmbedResult {
  Macroblock macroblock;
  std::size_t bits_consumed = 0;
};

// Shift every nonzero AC15 and write one 3-bit group into each consecutive
// pair of zero candidates (raster block order; an odd leftover stays 0).
// Indices 0..14 are never touched. Pre: mb.embeddable; the reader holds at
// least 3 bits per pair.
MacroblockEmbedResult embed_macroblock(const Macroblock& mb, BitReader& bits);

struct MacroblockExtractResult {
  Macroblock macroblock;
  BitVector bits;
};

// Inverse of embed_macroblock: decode pairs back to bits and zero them,
// unshift recovery coefficients. Throws InvalidMarkedBlock for pair value
// (-1,-1) or a nonzero unpaired extracting coefficient.
MacroblockExtractResult extract_macroblock(const Macroblock& mb);

struct FrameEmbedStats {
  int frame = 0;
  std::int64_t embeddable_blocks = 0;  // non-all-zero blocks in embeddable MBs
  std::int64_t zero_ac15 = 0;          // zero-candidate blocks
  std::int64_t paired_zero_ac15 = 0;   // candidates actually paired (even)
  std::int64_t shifted_blocks = 0;     // recovery-shifted blocks
  std::int64_t capacity_bits = 0;      // 3 * pairs
  std::int64_t payload_bits = 0;       // prefix/payload bits landing here
};

struct EmbedReport {
  std::int64_t capacity_bits = 0;  // whole-stream capacity
  std::int64_t frame_bits = 0;     // 32 + 8 * payload size
  std::vector<FrameEmbedStats> frames;
};

struct StreamEmbedResult {
  CoefficientStream stream;
  EmbedReport report;
};

// Embed a length-prefixed payload into every embeddable macroblock of every
// frame. All embeddable macroblocks are fully processed: shifts are applied
// and leftover pairs carry the identity padding code even after the payload
// runs out. Pre: !stream.marked (std::invalid_argument otherwise). Throws
// CapacityError when 32 + 8*payload.size() exceeds capacity(stream).
StreamEmbedResult embed_stream(const CoefficientStream& stream,
                               std::span<const std::uint8_t> payload);

struct StreamExtractResult {
  CoefficientStream stream;
  std::vector<std::uint8_t> payload;
};

// Inverse of embed_stream; the restored stream is bit-identical to the
// pre-embedding stream. Pre: stream.marked. Throws MalformedPrefix when the
// length prefix cannot be decoded and InvalidMarkedBlock (with frame/MB/block
// coordinates) on corrupt blocks.
StreamExtractResult extract_stream(const CoefficientStream& stream);

// 3 * floor(Z/2) summed over embeddable macroblocks, Z = zero candidates.
// Pre: !stream.marked.
std::int64_t capacity(const CoefficientStream& stream);

// Same accounting for a single macroblock; 0 when not embeddable.
std::int64_t macroblock_capacity(const Macroblock& mb);

}  // namespace qdh
