#include "qdh/io_formats.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qdh/errors.hpp"

namespace qdh {
namespace {

constexpr char kMagic[4] = {'Q', 'D', 'C', '1'};
constexpr std::size_t kBlockBytes = 32;   // 16 levels as i16
constexpr std::size_t kMacroblockBytes = 16 * kBlockBytes;

void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint16_t get_u16le(std::span<const std::uint8_t> bytes, std::size_t at) {
  return static_cast<std::uint16_t>(bytes[at] | (bytes[at + 1] << 8));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path);
  return bytes;
}

void write_file(const std::string& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed on " + path);
}

std::string fixed6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_row_csv(std::ostream& out, const ReportRow& row) {
  out << row.frame << ',' << row.capacity_bits << ',' << row.embedded_bits
      << ',' << fixed6(row.cp) << ',' << fixed6(row.full) << ','
      << fixed6(row.ec) << ',' << fixed6(row.psnr_db) << ','
      << row.cost_original << ',' << row.cost_marked << ',' << fixed6(row.bir)
      << '\n';
}

nlohmann::ordered_json row_json(const ReportRow& row) {
  nlohmann::ordered_json j;
  j["frame"] = row.frame;
  j["capacity_bits"] = row.capacity_bits;
  j["embedded_bits"] = row.embedded_bits;
  j["cp"] = row.cp;
  j["full"] = row.full;
  j["ec"] = row.ec;
  if (std::isinf(row.psnr_db))
    j["psnr_db"] = row.psnr_db > 0 ? "inf" : "-inf";
  else
    j["psnr_db"] = row.psnr_db;
  j["cost_original"] = row.cost_original;
  j["cost_marked"] = row.cost_marked;
  j["bir"] = row.bir;
  return j;
}

}  // namespace

std::vector<std::uint8_t> write_sidecar(const CoefficientStream& stream) {
  if (stream.qp < 0 || stream.qp > 51)
    throw FormatError("qp " + std::to_string(stream.qp) + " outside [0, 51]");
  if (stream.mb_cols < 0 || stream.mb_rows < 0 ||
      stream.mb_cols > 0xffff || stream.mb_rows > 0xffff ||
      stream.frames.size() > 0xffff)
    throw FormatError("stream geometry does not fit the container header");
  const auto per_frame = static_cast<std::size_t>(stream.mb_cols) *
                         static_cast<std::size_t>(stream.mb_rows);
  std::vector<std::uint8_t> out;
  out.reserve(kSidecarHeaderSize +
              stream.frames.size() * per_frame * kMacroblockBytes);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u16le(out, static_cast<std::uint16_t>(stream.mb_cols));
  put_u16le(out, static_cast<std::uint16_t>(stream.mb_rows));
  put_u16le(out, static_cast<std::uint16_t>(stream.frames.size()));
  out.push_back(static_cast<std::uint8_t>(stream.qp));
  out.push_back(stream.marked ? 0x01 : 0x00);
  for (const auto& frame : stream.frames) {
    if (frame.size() != per_frame)
      throw FormatError("frame holds " + std::to_string(frame.size()) +
                        " macroblocks, geometry says " +
                        std::to_string(per_frame));
    for (const Macroblock& mb : frame)
      for (const QdctBlock& block : mb.blocks)
        for (Level c : block.coeffs)
          put_u16le(out, static_cast<std::uint16_t>(c));
  }
  return out;
}

CoefficientStream read_sidecar(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSidecarHeaderSize)
    throw FormatError("container shorter than its 12-byte header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("bad magic, not a coefficient sidecar");
  CoefficientStream stream;
  stream.mb_cols = get_u16le(bytes, 4);
  stream.mb_rows = get_u16le(bytes, 6);
  const std::size_t frame_count = get_u16le(bytes, 8);
  stream.qp = bytes[10];
  if (stream.qp > 51)
    throw FormatError("qp " + std::to_string(stream.qp) + " outside [0, 51]");
  stream.marked = (bytes[11] & 0x01) != 0;

  const std::size_t per_frame = static_cast<std::size_t>(stream.mb_cols) *
                                static_cast<std::size_t>(stream.mb_rows);
  const std::size_t expected =
      kSidecarHeaderSize + frame_count * per_frame * kMacroblockBytes;
  if (bytes.size() != expected)
    throw FormatError("container size " + std::to_string(bytes.size()) +
                      " does not match header, expected " +
                      std::to_string(expected));

  std::size_t at = kSidecarHeaderSize;
  stream.frames.resize(frame_count);
  for (auto& frame : stream.frames) {
    frame.resize(per_frame);
    for (Macroblock& mb : frame)
      for (QdctBlock& block : mb.blocks)
        for (Level& c : block.coeffs) {
          c = static_cast<Level>(get_u16le(bytes, at));
          at += 2;
        }
  }
  return stream;
}

void write_sidecar_file(const std::string& path,
                        const CoefficientStream& stream) {
  write_file(path, write_sidecar(stream));
}

CoefficientStream read_sidecar_file(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  try {
    return read_sidecar(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

namespace {

struct Y4mHeader {
  int width = 0;
  int height = 0;
  bool mono = false;
};

// Parse the stream header line "YUV4MPEG2 W.. H.. ..." up to '\n'.
Y4mHeader parse_y4m_header(std::span<const std::uint8_t> bytes,
                           std::size_t& at) {
  static constexpr char kY4mMagic[] = "YUV4MPEG2";
  const std::size_t magic_len = sizeof(kY4mMagic) - 1;
  if (bytes.size() < magic_len ||
      std::memcmp(bytes.data(), kY4mMagic, magic_len) != 0)
    throw FormatError("missing YUV4MPEG2 magic");
  std::size_t end = magic_len;
  while (end < bytes.size() && bytes[end] != '\n') ++end;
  if (end == bytes.size())
    throw FormatError("unterminated stream header");

  Y4mHeader header;
  std::string line(reinterpret_cast<const char*>(bytes.data()) + magic_len,
                   end - magic_len);
  std::istringstream fields(line);
  std::string field;
  while (fields >> field) {
    if (field.size() < 2) continue;
    const char tag = field[0];
    const std::string value = field.substr(1);
    try {
      if (tag == 'W')
        header.width = std::stoi(value);
      else if (tag == 'H')
        header.height = std::stoi(value);
      else if (tag == 'C') {
        if (value == "mono")
          header.mono = true;
        else if (value.rfind("420", 0) != 0)
          throw FormatError("unsupported colorspace C" + value);
      }
      // F/I/A/X parameters carry no information we use.
    } catch (const std::invalid_argument&) {
      throw FormatError("malformed header parameter " + field);
    } catch (const std::out_of_range&) {
      throw FormatError("malformed header parameter " + field);
    }
  }
  if (header.width <= 0 || header.height <= 0)
    throw FormatError("missing or invalid W/H in stream header");
  if (!header.mono && (header.width % 2 != 0 || header.height % 2 != 0))
    throw FormatError("4:2:0 requires even dimensions");
  at = end + 1;
  return header;
}

}  // namespace

VideoSequence read_y4m(std::span<const std::uint8_t> bytes) {
  std::size_t at = 0;
  const Y4mHeader header = parse_y4m_header(bytes, at);

  const std::size_t luma_bytes =
      static_cast<std::size_t>(header.width) * header.height;
  const std::size_t chroma_bytes =
      header.mono ? 0
                  : 2 * (static_cast<std::size_t>(header.width) / 2) *
                        (static_cast<std::size_t>(header.height) / 2);

  VideoSequence seq;
  seq.width = header.width;
  seq.height = header.height;

  static constexpr char kFrameMagic[] = "FRAME";
  const std::size_t frame_magic_len = sizeof(kFrameMagic) - 1;
  int frame_index = 0;
  while (at < bytes.size()) {
    if (bytes.size() - at < frame_magic_len ||
        std::memcmp(bytes.data() + at, kFrameMagic, frame_magic_len) != 0)
      throw FormatError("frame " + std::to_string(frame_index) +
                        ": missing FRAME marker");
    at += frame_magic_len;
    while (at < bytes.size() && bytes[at] != '\n') ++at;
    if (at == bytes.size())
      throw FormatError("frame " + std::to_string(frame_index) +
                        ": unterminated frame header");
    ++at;
    if (bytes.size() - at < luma_bytes + chroma_bytes)
      throw FormatError("frame " + std::to_string(frame_index) +
                        ": truncated, expected " +
                        std::to_string(luma_bytes + chroma_bytes) +
                        " sample bytes, have " +
                        std::to_string(bytes.size() - at));
    PixelPlane plane;
    plane.width = header.width;
    plane.height = header.height;
    plane.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(at),
                         bytes.begin() +
                             static_cast<std::ptrdiff_t>(at + luma_bytes));
    at += luma_bytes + chroma_bytes;  // chroma skipped
    seq.frames.push_back(pad_to_macroblocks(plane));
    ++frame_index;
  }
  return seq;
}

VideoSequence read_y4m_file(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  try {
    return read_y4m(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

VideoSequence read_raw_yuv_file(const std::string& path, int width,
                                int height) {
  if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0)
    throw FormatError("raw 4:2:0 requires positive even dimensions");
  const std::vector<std::uint8_t> bytes = read_file(path);
  const std::size_t luma = static_cast<std::size_t>(width) * height;
  const std::size_t frame_bytes = luma * 3 / 2;
  if (bytes.size() % frame_bytes != 0)
    throw FormatError(path + ": size " + std::to_string(bytes.size()) +
                      " is not a multiple of the " +
                      std::to_string(frame_bytes) + "-byte frame size");
  VideoSequence seq;
  seq.width = width;
  seq.height = height;
  for (std::size_t at = 0; at < bytes.size(); at += frame_bytes) {
    PixelPlane plane;
    plane.width = width;
    plane.height = height;
    plane.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(at),
                         bytes.begin() + static_cast<std::ptrdiff_t>(at + luma));
    seq.frames.push_back(pad_to_macroblocks(plane));
  }
  return seq;
}

void write_report_csv(std::ostream& out, const Report& report) {
  out << "# qdc-report " << report.schema_version << '\n';
  for (const auto& [key, value] : report.notes)
    out << "# " << key << ' ' << value << '\n';
  out << "frame,capacity_bits,embedded_bits,cp,full,ec,psnr_db,"
         "cost_original,cost_marked,bir\n";
  for (const ReportSection& section : report.sections) {
    for (const auto& [key, value] : section.notes)
      out << "# " << key << ' ' << value << '\n';
    for (const ReportRow& row : section.rows) write_row_csv(out, row);
  }
}

void write_report_json(std::ostream& out, const Report& report) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = report.schema_version;
  auto& notes = doc["notes"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.notes) notes[key] = value;
  auto& sections = doc["sections"] = nlohmann::ordered_json::array();
  for (const ReportSection& section : report.sections) {
    nlohmann::ordered_json s;
    auto& snotes = s["notes"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : section.notes) snotes[key] = value;
    auto& rows = s["rows"] = nlohmann::ordered_json::array();
    for (const ReportRow& row : section.rows) rows.push_back(row_json(row));
    sections.push_back(std::move(s));
  }
  out << doc.dump(2) << '\n';
}

void write_report_files(const std::string& csv_path, const Report& report) {
  std::string json_path = csv_path;
  if (const auto dot = json_path.rfind('.');
      dot != std::string::npos && json_path.find('/', dot) == std::string::npos)
    json_path.resize(dot);
  json_path += ".json";

  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) throw IoError("cannot open " + csv_path + " for writing");
  write_report_csv(csv, report);
  if (!csv) throw IoError("write failed on " + csv_path);

  std::ofstream json(json_path, std::ios::trunc);
  if (!json) throw IoError("cannot open " + json_path + " for writing");
  write_report_json(json, report);
  if (!json) throw IoError("write failed on " + json_path);
}

}  // namespace qdh
