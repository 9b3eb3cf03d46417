#pragma once

#include <cstdint>
#include <vector>

#include "qdh/block_model.hpp"

namespace qdh {

// 8-bit luma plane, raster order.
struct PixelPlane {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;

  static PixelPlane filled(int width, int height, std::uint8_t value);

  std::uint8_t at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return samples[static_cast<std::size_t>(y) * width + x];
  }

  bool macroblock_aligned() const {
    return width > 0 && height > 0 && width % 16 == 0 && height % 16 == 0;
  }

  friend bool operator==(const PixelPlane&, const PixelPlane&) = default;
};

// Top-left window of a plane; used to undo alignment padding before
// measuring quality on the original geometry.
PixelPlane crop(const PixelPlane& plane, int width, int height);

// Replicate the last row/column until both dimensions are multiples of 16.
PixelPlane pad_to_macroblocks(const PixelPlane& plane);

// QP-driven multiplier/shift state for the 4x4 integer transform. Derived
// tables depend only on qp mod 6 and qp div 6.
class QuantParams {
 public:
  explicit QuantParams(int qp);  // throws std::invalid_argument outside [0,51]

  int qp() const { return qp_; }
  int quant_shift() const { return 15 + qp_ / 6; }
  int rescale_shift() const { return qp_ / 6; }
  int quant_scale(int raster_pos) const;
  int rescale(int raster_pos) const;
  // Intra rounding offset, one third of the quantization interval.
  std::int32_t rounding_offset() const {
    return static_cast<std::int32_t>((1 << quant_shift()) / 3);
  }

 private:
  int qp_;
};

// Core 4x4 integer transform, exact integer arithmetic. Input entries must
// fit 9 signed bits.
Grid4x4 forward_transform_4x4(const Grid4x4& residual);

// Sign-preserving scaled rounding of transform coefficients into levels,
// delivered in zig-zag order.
QdctBlock quantize(const Grid4x4& coeffs, const QuantParams& params);

// Rescale levels and run the inverse core transform; final right shift by 6
// with rounding. Deterministic integers.
Grid4x4 dequantize_inverse_transform(const QdctBlock& block,
                                     const QuantParams& params);

// Treat each 4x4 pixel block as a residual (no prediction), transform,
// quantize, zig-zag. Throws FormatError for misaligned planes.
std::vector<Macroblock> encode_frame(const PixelPlane& plane,
                                     const QuantParams& params);

// Inverse of encode_frame with a [0,255] clamp.
PixelPlane decode_frame(const std::vector<Macroblock>& frame, int mb_cols,
                        int mb_rows, const QuantParams& params);

// Encode a sequence of equally sized planes into a stream.
CoefficientStream encode_planes(const std::vector<PixelPlane>& planes, int qp);

}  // namespace qdh
