#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qdh {

// Quantized transform level. 16-bit is the container width; every producer
// in this library stays far inside it.
using Level = std::int16_t;

// One 4x4 block of quantized transform levels stored in zig-zag order:
// index 0 is DC, index 15 is AC15, the highest-frequency position and the
// only one the hiding scheme ever modifies.
struct QdctBlock {
  std::array<Level, 16> coeffs{};

  Level& operator[](int i) { return coeffs[static_cast<std::size_t>(i)]; }
  Level operator[](int i) const { return coeffs[static_cast<std::size_t>(i)]; }

  Level ac15() const { return coeffs[15]; }

  bool all_zero() const;
  // True when any of the indices 0..14 is nonzero.
  bool nonzero_below_ac15() const;

  friend bool operator==(const QdctBlock&, const QdctBlock&) = default;
};

// 16 luma 4x4 blocks in raster order (a 4x4 grid of blocks). The pairing
// scope for coefficient-pairs. `embeddable` models the intra-4x4 prediction
// mode selection; the codec model has no real modes, so it defaults to true.
struct Macroblock {
  std::array<QdctBlock, 16> blocks{};
  bool embeddable = true;

  friend bool operator==(const Macroblock&, const Macroblock&) = default;
};

// Ordered frames of macroblocks plus geometry/QP header. This is the object
// embedding and extraction operate on.
struct CoefficientStream {
  int mb_cols = 0;
  int mb_rows = 0;
  int qp = 28;
  bool marked = false;
  std::vector<std::vector<Macroblock>> frames;

  int macroblocks_per_frame() const { return mb_cols * mb_rows; }

  friend bool operator==(const CoefficientStream&,
                         const CoefficientStream&) = default;
};

// 4x4 grid in raster order (row-major), index = 4*row + col.
using Grid4x4 = std::array<std::int32_t, 16>;

// Raster index visited at scan position k, low to high frequency.
inline constexpr std::array<int, 16> kZigzagOrder = {
    0, 1, 4, 8, 5, 2, 3, 6, 9, 12, 13, 10, 7, 11, 14, 15};

// Rearrange a raster grid of levels into scan order.
QdctBlock zigzag_scan(const Grid4x4& grid);

// Inverse of zigzag_scan.
Grid4x4 inverse_zigzag(const QdctBlock& block);

}  // namespace qdh
