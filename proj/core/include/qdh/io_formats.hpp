#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdh/block_model.hpp"
#include "qdh/transform_quant.hpp"

namespace qdh {

// Coefficient sidecar container, little-endian fixed width:
//   "QDC1" | mb_cols u16 | mb_rows u16 | frame_count u16 | qp u8 | flags u8
// then per frame, per macroblock (raster), 16 blocks (raster) of 16 levels
// as i16 in zig-zag order. Flags bit 0 is the marked flag. Total size is
// 12 + frame_count * mb_cols * mb_rows * 512 bytes exactly.
inline constexpr std::size_t kSidecarHeaderSize = 12;

std::vector<std::uint8_t> write_sidecar(const CoefficientStream& stream);
CoefficientStream read_sidecar(std::span<const std::uint8_t> bytes);

void write_sidecar_file(const std::string& path,
                        const CoefficientStream& stream);
CoefficientStream read_sidecar_file(const std::string& path);

// Decoded luma sequence. Frames are edge-padded to macroblock alignment;
// width/height keep the original geometry so quality is measured on it.
struct VideoSequence {
  int width = 0;
  int height = 0;
  std::vector<PixelPlane> frames;
};

// Y4M ingestion (4:2:0 and mono; chroma is skipped). Throws FormatError on
// missing magic, unsupported colorspace, or truncated frames.
VideoSequence read_y4m(std::span<const std::uint8_t> bytes);
VideoSequence read_y4m_file(const std::string& path);

// Raw 4:2:0 ingestion; the file size must be a whole number of frames.
VideoSequence read_raw_yuv_file(const std::string& path, int width,
                                int height);

// One per-frame report row. `bir` is a percentage.
struct ReportRow {
  int frame = 0;
  std::int64_t capacity_bits = 0;
  std::int64_t embedded_bits = 0;
  double cp = 0.0;
  double full = 0.0;
  double ec = 0.0;
  double psnr_db = 0.0;
  std::int64_t cost_original = 0;
  std::int64_t cost_marked = 0;
  double bir = 0.0;
};

// Rows grouped under a set of note lines (analyze emits one section per
// payload size; embed emits a single section).
struct ReportSection {
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<ReportRow> rows;
};

struct Report {
  int schema_version = 1;
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<ReportSection> sections;
};

// CSV: "# qdc-report <version>" then "# key value" note lines, one fixed
// header row, then per section its note lines and rows. Fixed 6-decimal
// fields, locale independent, byte-stable for identical inputs.
void write_report_csv(std::ostream& out, const Report& report);
// Same values as a JSON document.
void write_report_json(std::ostream& out, const Report& report);

void write_report_files(const std::string& csv_path, const Report& report);

}  // namespace qdh
