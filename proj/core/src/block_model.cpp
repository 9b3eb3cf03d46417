#include "qdh/block_model.hpp"

#include <cassert>

namespace qdh {

bool QdctBlock::all_zero() const {
  for (Level c : coeffs)
    if (c != 0) return false;
  return true;
}

bool QdctBlock::nonzero_below_ac15() const {
  for (int i = 0; i < 15; ++i)
    if (coeffs[static_cast<std::size_t>(i)] != 0) return true;
  return false;
}

QdctBlock zigzag_scan(const Grid4x4& grid) {
  QdctBlock out;
  for (int k = 0; k < 16; ++k) {
    const std::int32_t v = grid[static_cast<std::size_t>(kZigzagOrder[static_cast<std::size_t>(k)])];
    assert(v >= INT16_MIN && v <= INT16_MAX);
    out[k] = static_cast<Level>(v);
  }
  return out;
}

Grid4x4 inverse_zigzag(const QdctBlock& block) {
  Grid4x4 grid{};
  for (int k = 0; k < 16; ++k)
    grid[static_cast<std::size_t>(kZigzagOrder[static_cast<std::size_t>(k)])] = block[k];
  return grid;
}

}  // namespace qdh
