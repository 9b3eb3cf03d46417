#pragma once

#include <cstdint>
#include <vector>

#include "qdh/block_model.hpp"
#include "qdh/transform_quant.hpp"

namespace qdh {

struct CapacityCounts {
  std::int64_t embeddable_blocks = 0;  // non-all-zero blocks in embeddable MBs
  std::int64_t zero_ac15 = 0;          // zero candidates among them
  std::int64_t paired_zero_ac15 = 0;   // candidates that form pairs (even)
};

// Capacity-structure ratios over embeddable 4x4 blocks. `defined` is false
// when there are no embeddable blocks (the ratios would divide by zero).
struct CapacityMetrics {
  bool defined = false;
  double cp = 0.0;    // paired_zero_ac15 / embeddable_blocks
  double full = 0.0;  // zero_ac15 / embeddable_blocks
  double ec = 0.0;    // embedded_bits / embeddable_blocks, at most 1.5
  CapacityCounts counts;
  std::int64_t embedded_bits = 0;
};

// Encoder-side counts; the stream must be unmarked.
CapacityCounts count_embeddable_blocks(const std::vector<Macroblock>& frame);
CapacityCounts count_embeddable_blocks(const CoefficientStream& stream);

CapacityMetrics capacity_metrics(const CapacityCounts& counts,
                                 std::int64_t embedded_bits);
CapacityMetrics capacity_metrics(const CoefficientStream& stream,
                                 std::int64_t embedded_bits);

// 10*log10(255^2 / MSE) over luma; +infinity for identical planes. Throws
// std::invalid_argument on dimension mismatch.
double psnr(const PixelPlane& reference, const PixelPlane& test);

// Deterministic run-level bit cost of one block under an exp-Golomb proxy:
// a count prefix plus, per nonzero level, a signed level code and the
// preceding zero-run length. A stand-in for real entropy coding that is
// monotone in level magnitude and count.
std::int64_t coding_cost(const QdctBlock& block);
std::int64_t coding_cost(const Macroblock& mb);
std::int64_t coding_cost(const std::vector<Macroblock>& frame);
std::int64_t coding_cost(const CoefficientStream& stream);

// Bit-rate increment ratio (cost_marked - cost_original) / cost_original.
// Reported as a percentage elsewhere. Throws std::invalid_argument when
// cost_original is not positive.
double bir(double cost_original, double cost_marked);

// Quality/rate summary for one frame of a marked stream.
struct RateQualityRecord {
  double psnr_db = 0.0;
  std::int64_t cost_original = 0;
  std::int64_t cost_marked = 0;
  double bir = 0.0;  // ratio, not percent
};

RateQualityRecord rate_quality(const PixelPlane& reference,
                               const PixelPlane& test,
                               std::int64_t cost_original,
                               std::int64_t cost_marked);

}  // namespace qdh
