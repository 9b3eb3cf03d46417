#include "qdh/transform_quant.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qdh/errors.hpp"

namespace qdh {
namespace {

// Core matrix rows (1,1,1,1),(2,1,-1,-2),(1,-1,-1,1),(1,-2,2,-1).
constexpr int kCore[4][4] = {
    {1, 1, 1, 1}, {2, 1, -1, -2}, {1, -1, -1, 1}, {1, -2, 2, -1}};

// Position category: 0 for (0,0),(0,2),(2,0),(2,2); 1 for (1,1),(1,3),
// (3,1),(3,3); 2 for the rest. Raster order.
constexpr int kPosCategory[16] = {0, 2, 0, 2, 2, 1, 2, 1,
                                  0, 2, 0, 2, 2, 1, 2, 1};

// Quantizer multipliers and rescale factors per qp mod 6 and category.
constexpr int kQuantScale[6][3] = {{13107, 5243, 8066}, {11916, 4660, 7490},
                                   {10082, 4194, 6554}, {9362, 3647, 5825},
                                   {8192, 3355, 5243},  {7282, 2893, 4559}};
constexpr int kRescale[6][3] = {{10, 16, 13}, {11, 18, 14}, {13, 20, 16},
                                {14, 23, 18}, {16, 25, 20}, {18, 29, 23}};

std::uint8_t clamp_pixel(std::int32_t v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

}  // namespace

PixelPlane PixelPlane::filled(int width, int height, std::uint8_t value) {
  PixelPlane p;
  p.width = width;
  p.height = height;
  p.samples.assign(static_cast<std::size_t>(width) * height, value);
  return p;
}

PixelPlane crop(const PixelPlane& plane, int width, int height) {
  if (width > plane.width || height > plane.height || width <= 0 ||
      height <= 0)
    throw std::invalid_argument("crop window exceeds plane");
  PixelPlane out;
  out.width = width;
  out.height = height;
  out.samples.resize(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) out.at(x, y) = plane.at(x, y);
  return out;
}

PixelPlane pad_to_macroblocks(const PixelPlane& plane) {
  const int pw = (plane.width + 15) / 16 * 16;
  const int ph = (plane.height + 15) / 16 * 16;
  if (pw == plane.width && ph == plane.height) return plane;
  PixelPlane out;
  out.width = pw;
  out.height = ph;
  out.samples.resize(static_cast<std::size_t>(pw) * ph);
  for (int y = 0; y < ph; ++y) {
    const int sy = std::min(y, plane.height - 1);
    for (int x = 0; x < pw; ++x)
      out.at(x, y) = plane.at(std::min(x, plane.width - 1), sy);
  }
  return out;
}

QuantParams::QuantParams(int qp) : qp_(qp) {
  if (qp < 0 || qp > 51)
    throw std::invalid_argument("qp " + std::to_string(qp) +
                                " outside [0, 51]");
}

int QuantParams::quant_scale(int raster_pos) const {
  return kQuantScale[qp_ % 6][kPosCategory[raster_pos]];
}

int QuantParams::rescale(int raster_pos) const {
  return kRescale[qp_ % 6][kPosCategory[raster_pos]];
}

Grid4x4 forward_transform_4x4(const Grid4x4& residual) {
  // C * X
  std::int32_t tmp[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::int32_t s = 0;
      for (int k = 0; k < 4; ++k)
        s += kCore[i][k] * residual[static_cast<std::size_t>(4 * k + j)];
      tmp[i][j] = s;
    }
  // (C * X) * C^T
  Grid4x4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::int32_t s = 0;
      for (int k = 0; k < 4; ++k) s += tmp[i][k] * kCore[j][k];
      out[static_cast<std::size_t>(4 * i + j)] = s;
    }
  return out;
}

QdctBlock quantize(const Grid4x4& coeffs, const QuantParams& params) {
  const int qbits = params.quant_shift();
  const std::int32_t f = params.rounding_offset();
  Grid4x4 levels{};
  for (int p = 0; p < 16; ++p) {
    const std::int32_t w = coeffs[static_cast<std::size_t>(p)];
    const std::int64_t scaled =
        static_cast<std::int64_t>(std::abs(w)) * params.quant_scale(p) + f;
    const auto magnitude = static_cast<std::int32_t>(scaled >> qbits);
    levels[static_cast<std::size_t>(p)] = w < 0 ? -magnitude : magnitude;
  }
  return zigzag_scan(levels);
}

Grid4x4 dequantize_inverse_transform(const QdctBlock& block,
                                     const QuantParams& params) {
  const Grid4x4 levels = inverse_zigzag(block);
  const int shift = params.rescale_shift();
  std::int32_t d[4][4];
  for (int p = 0; p < 16; ++p)
    d[p / 4][p % 4] =
        levels[static_cast<std::size_t>(p)] * (params.rescale(p) << shift);

  // Row butterflies, then column butterflies; >> is arithmetic.
  std::int32_t f[4][4];
  for (int i = 0; i < 4; ++i) {
    const std::int32_t e0 = d[i][0] + d[i][2];
    const std::int32_t e1 = d[i][0] - d[i][2];
    const std::int32_t e2 = (d[i][1] >> 1) - d[i][3];
    const std::int32_t e3 = d[i][1] + (d[i][3] >> 1);
    f[i][0] = e0 + e3;
    f[i][1] = e1 + e2;
    f[i][2] = e1 - e2;
    f[i][3] = e0 - e3;
  }
  Grid4x4 out{};
  for (int j = 0; j < 4; ++j) {
    const std::int32_t g0 = f[0][j] + f[2][j];
    const std::int32_t g1 = f[0][j] - f[2][j];
    const std::int32_t g2 = (f[1][j] >> 1) - f[3][j];
    const std::int32_t g3 = f[1][j] + (f[3][j] >> 1);
    out[static_cast<std::size_t>(0 + j)] = (g0 + g3 + 32) >> 6;
    out[static_cast<std::size_t>(4 + j)] = (g1 + g2 + 32) >> 6;
    out[static_cast<std::size_t>(8 + j)] = (g1 - g2 + 32) >> 6;
    out[static_cast<std::size_t>(12 + j)] = (g0 - g3 + 32) >> 6;
  }
  return out;
}

std::vector<Macroblock> encode_frame(const PixelPlane& plane,
                                     const QuantParams& params) {
  if (!plane.macroblock_aligned())
    throw FormatError("plane " + std::to_string(plane.width) + "x" +
                      std::to_string(plane.height) +
                      " is not macroblock aligned");
  const int mb_cols = plane.width / 16;
  const int mb_rows = plane.height / 16;
  std::vector<Macroblock> frame(static_cast<std::size_t>(mb_cols) * mb_rows);
  for (int my = 0; my < mb_rows; ++my)
    for (int mx = 0; mx < mb_cols; ++mx) {
      Macroblock& mb = frame[static_cast<std::size_t>(my) * mb_cols + mx];
      for (int b = 0; b < 16; ++b) {
        const int bx = mx * 16 + (b % 4) * 4;
        const int by = my * 16 + (b / 4) * 4;
        Grid4x4 residual{};
        for (int p = 0; p < 16; ++p)
          residual[static_cast<std::size_t>(p)] =
              plane.at(bx + p % 4, by + p / 4);
        mb.blocks[static_cast<std::size_t>(b)] =
            quantize(forward_transform_4x4(residual), params);
      }
    }
  return frame;
}

PixelPlane decode_frame(const std::vector<Macroblock>& frame, int mb_cols,
                        int mb_rows, const QuantParams& params) {
  if (frame.size() != static_cast<std::size_t>(mb_cols) * mb_rows)
    throw std::invalid_argument("frame macroblock count mismatch");
  PixelPlane plane = PixelPlane::filled(mb_cols * 16, mb_rows * 16, 0);
  for (int my = 0; my < mb_rows; ++my)
    for (int mx = 0; mx < mb_cols; ++mx) {
      const Macroblock& mb = frame[static_cast<std::size_t>(my) * mb_cols + mx];
      for (int b = 0; b < 16; ++b) {
        const int bx = mx * 16 + (b % 4) * 4;
        const int by = my * 16 + (b / 4) * 4;
        const Grid4x4 rec = dequantize_inverse_transform(
            mb.blocks[static_cast<std::size_t>(b)], params);
        for (int p = 0; p < 16; ++p)
          plane.at(bx + p % 4, by + p / 4) =
              clamp_pixel(rec[static_cast<std::size_t>(p)]);
      }
    }
  return plane;
}

CoefficientStream encode_planes(const std::vector<PixelPlane>& planes,
                                int qp) {
  const QuantParams params(qp);
  CoefficientStream stream;
  stream.qp = qp;
  for (const PixelPlane& plane : planes) {
    if (stream.frames.empty()) {
      stream.mb_cols = plane.width / 16;
      stream.mb_rows = plane.height / 16;
    } else if (plane.width / 16 != stream.mb_cols ||
               plane.height / 16 != stream.mb_rows) {
      throw FormatError("frame geometry changes mid-sequence");
    }
    stream.frames.push_back(encode_frame(plane, params));
  }
  return stream;
}

}  // namespace qdh
