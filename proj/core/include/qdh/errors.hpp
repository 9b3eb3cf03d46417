#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qdh {

// Base class for every library error that maps to a tool exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed container, report, or video data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Payload does not fit the stream. Carries both sides of the comparison.
class CapacityError : public Error {
 public:
  CapacityError(std::int64_t capacity_bits, std::int64_t required_bits)
      : Error("capacity " + std::to_string(capacity_bits) + " bits, required " +
              std::to_string(required_bits) + " bits"),
        capacity_bits_(capacity_bits),
        required_bits_(required_bits) {}

  std::int64_t capacity_bits() const noexcept { return capacity_bits_; }
  std::int64_t required_bits() const noexcept { return required_bits_; }

 private:
  std::int64_t capacity_bits_;
  std::int64_t required_bits_;
};

// A marked stream contains a block no conformant embedder can produce.
// Coordinates are -1 until the enclosing walk fills them in.
class InvalidMarkedBlock : public FormatError {
 public:
  explicit InvalidMarkedBlock(std::string reason, int frame = -1,
                              int macroblock = -1, int block = -1)
      : FormatError(compose(reason, frame, macroblock, block)),
        reason_(std::move(reason)),
        frame_(frame),
        macroblock_(macroblock),
        block_(block) {}

  InvalidMarkedBlock at(int frame, int macroblock) const {
    return InvalidMarkedBlock(reason_, frame, macroblock, block_);
  }
  InvalidMarkedBlock at_block(int block) const {
    return InvalidMarkedBlock(reason_, frame_, macroblock_, block);
  }

  const std::string& reason() const noexcept { return reason_; }
  int frame() const noexcept { return frame_; }
  int macroblock() const noexcept { return macroblock_; }
  int block() const noexcept { return block_; }

 private:
  static std::string compose(const std::string& reason, int frame,
                             int macroblock, int block) {
    std::string msg = "invalid marked block: " + reason;
    if (frame >= 0 || macroblock >= 0 || block >= 0) {
      msg += " (frame " + std::to_string(frame) + ", macroblock " +
             std::to_string(macroblock) + ", block " + std::to_string(block) +
             ")";
    }
    return msg;
  }

  std::string reason_;
  int frame_;
  int macroblock_;
  int block_;
};

// The extracted bit stream has no decodable length prefix.
class MalformedPrefix : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace qdh
