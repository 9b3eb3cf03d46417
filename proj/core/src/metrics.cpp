#include "qdh/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "qdh/rdh_engine.hpp"

namespace qdh {
namespace {

// Unsigned exp-Golomb code length.
std::int64_t ue_bits(std::int64_t k) {
  std::int64_t len = 0;
  while ((k + 1) >> (len + 1) != 0) ++len;
  return 2 * len + 1;
}

// Signed mapping: positive v -> 2v-1, negative v -> 2|v|.
std::int64_t se_bits(std::int64_t v) {
  return ue_bits(v > 0 ? 2 * v - 1 : -2 * v);
}

}  // namespace

CapacityCounts count_embeddable_blocks(const std::vector<Macroblock>& frame) {
  CapacityCounts counts;
  for (const Macroblock& mb : frame) {
    if (!mb.embeddable) continue;
    int zero = 0;
    for (const QdctBlock& block : mb.blocks) {
      switch (classify_block(block, Side::kEncoder)) {
        case BlockClass::kZeroCandidate:
          ++zero;
          ++counts.embeddable_blocks;
          break;
        case BlockClass::kRecoveryShift:
          ++counts.embeddable_blocks;
          break;
        default:
          break;
      }
    }
    counts.zero_ac15 += zero;
    counts.paired_zero_ac15 += 2 * (zero / 2);
  }
  return counts;
}

CapacityCounts count_embeddable_blocks(const CoefficientStream& stream) {
  if (stream.marked)
    throw std::invalid_argument(
        "capacity counts are defined on unmarked streams");
  CapacityCounts total;
  for (const auto& frame : stream.frames) {
    const CapacityCounts c = count_embeddable_blocks(frame);
    total.embeddable_blocks += c.embeddable_blocks;
    total.zero_ac15 += c.zero_ac15;
    total.paired_zero_ac15 += c.paired_zero_ac15;
  }
  return total;
}

CapacityMetrics capacity_metrics(const CapacityCounts& counts,
                                 std::int64_t embedded_bits) {
  CapacityMetrics m;
  m.counts = counts;
  m.embedded_bits = embedded_bits;
  if (counts.embeddable_blocks == 0) return m;  // undefined, flag stays false
  const auto blocks = static_cast<double>(counts.embeddable_blocks);
  m.defined = true;
  m.cp = static_cast<double>(counts.paired_zero_ac15) / blocks;
  m.full = static_cast<double>(counts.zero_ac15) / blocks;
  m.ec = static_cast<double>(embedded_bits) / blocks;
  return m;
}

CapacityMetrics capacity_metrics(const CoefficientStream& stream,
                                 std::int64_t embedded_bits) {
  return capacity_metrics(count_embeddable_blocks(stream), embedded_bits);
}

double psnr(const PixelPlane& reference, const PixelPlane& test) {
  if (reference.width != test.width || reference.height != test.height)
    throw std::invalid_argument("psnr: plane dimensions differ");
  const std::size_t n = reference.samples.size();
  if (n == 0) throw std::invalid_argument("psnr: empty planes");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(reference.samples[i]) -
                     static_cast<double>(test.samples[i]);
    sum += d * d;
  }
  if (sum == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sum / static_cast<double>(n);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::int64_t coding_cost(const QdctBlock& block) {
  std::int64_t nonzero = 0;
  for (Level c : block.coeffs)
    if (c != 0) ++nonzero;
  std::int64_t cost = ue_bits(nonzero);
  // Each nonzero level pays for itself plus the zero run preceding it in
  // scan order.
  int run = 0;
  for (int i = 0; i < 16; ++i) {
    if (block[i] == 0) {
      ++run;
      continue;
    }
    cost += se_bits(block[i]) + ue_bits(run);
    run = 0;
  }
  return cost;
}

std::int64_t coding_cost(const Macroblock& mb) {
  std::int64_t cost = 0;
  for (const QdctBlock& block : mb.blocks) cost += coding_cost(block);
  return cost;
}

std::int64_t coding_cost(const std::vector<Macroblock>& frame) {
  std::int64_t cost = 0;
  for (const Macroblock& mb : frame) cost += coding_cost(mb);
  return cost;
}

std::int64_t coding_cost(const CoefficientStream& stream) {
  std::int64_t cost = 0;
  for (const auto& frame : stream.frames) cost += coding_cost(frame);
  return cost;
}

double bir(double cost_original, double cost_marked) {
  if (!(cost_original > 0.0))
    throw std::invalid_argument("bir: original cost must be positive");
  return (cost_marked - cost_original) / cost_original;
}

RateQualityRecord rate_quality(const PixelPlane& reference,
                               const PixelPlane& test,
                               std::int64_t cost_original,
                               std::int64_t cost_marked) {
  RateQualityRecord record;
  record.psnr_db = psnr(reference, test);
  record.cost_original = cost_original;
  record.cost_marked = cost_marked;
  record.bir = bir(static_cast<double>(cost_original),
                   static_cast<double>(cost_marked));
  return record;
}

}  // namespace qdh
