#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qdh {

// Growable MSB-first bit sequence. Unused low bits of the final byte are
// kept zero so that equality over the byte storage is equality over bits.
class BitVector {
 public:
  BitVector() = default;

  void push_back(bool bit) {
    if (size_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (size_ % 8));
    ++size_;
  }

  // Append the low `count` bits of `value`, most significant first.
  void append_bits(std::uint32_t value, int count) {
    for (int i = count - 1; i >= 0; --i) push_back(((value >> i) & 1u) != 0);
  }

  void append_byte(std::uint8_t byte) { append_bits(byte, 8); }

  void append_bytes(const std::vector<std::uint8_t>& bytes) {
    for (std::uint8_t b : bytes) append_byte(b);
  }

  bool operator[](std::size_t i) const {
    return (bytes_[i / 8] & (0x80u >> (i % 8))) != 0;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

// Sequential cursor over a BitVector.
class BitReader {
 public:
  explicit BitReader(const BitVector& bits) : bits_(&bits) {}

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_->size() - pos_; }

  bool read_bit() {
    assert(remaining() > 0);
    return (*bits_)[pos_++];
  }

  // Read `count` bits MSB-first. Pre: remaining() >= count.
  std::uint32_t read_bits(int count) {
    std::uint32_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | (read_bit() ? 1u : 0u);
    return v;
  }

 private:
  const BitVector* bits_;
  std::size_t pos_ = 0;
};

}  // namespace qdh
