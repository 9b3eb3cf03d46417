// Command-line front end: encode video into coefficient sidecars, embed and
// extract payloads, verify round trips, and sweep payload sizes into
// CSV/JSON reports.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdh/errors.hpp"
#include "qdh/io_formats.hpp"
#include "qdh/metrics.hpp"
#include "qdh/rdh_engine.hpp"
#include "qdh/transform_quant.hpp"

namespace {

using qdh::CoefficientStream;
using qdh::PixelPlane;
using qdh::VideoSequence;

constexpr std::uint64_t kDefaultSeed = 0x1d5eed;

struct RunConfig {
  int qp = 28;
  int stride = 1;
  int offset = 0;
  std::string mask_path;
  std::uint64_t seed = kDefaultSeed;
};

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qdh::IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::string& path,
                       const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw qdh::IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw qdh::IoError("write failed on " + path);
}

bool sniff_y4m(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qdh::IoError("cannot open " + path);
  char magic[9] = {};
  in.read(magic, 9);
  return in.gcount() == 9 && std::string(magic, 9) == "YUV4MPEG2";
}

bool sniff_sidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qdh::IoError("cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::string(magic, 4) == "QDC1";
}

std::pair<int, int> parse_size(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos)
    throw std::invalid_argument("--size expects WIDTHxHEIGHT, got " + text);
  try {
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument("--size expects WIDTHxHEIGHT, got " + text);
  }
}

VideoSequence load_video(const std::string& path, const std::string& size) {
  if (sniff_y4m(path)) return qdh::read_y4m_file(path);
  if (size.empty())
    throw std::invalid_argument(
        path + " is not Y4M; raw YUV input needs --size WIDTHxHEIGHT");
  const auto [w, h] = parse_size(size);
  return qdh::read_raw_yuv_file(path, w, h);
}

// Frame stride/offset plus the optional macroblock mask. The same settings
// must be passed to embed and extract; they are not stored in the sidecar.
void apply_run_config(CoefficientStream& stream, const RunConfig& cfg) {
  if (cfg.stride < 1) throw std::invalid_argument("--stride must be >= 1");
  if (cfg.offset < 0 || cfg.offset >= cfg.stride)
    throw std::invalid_argument("--offset must be in [0, stride)");
  for (std::size_t f = 0; f < stream.frames.size(); ++f) {
    const bool frame_on = static_cast<int>(f % static_cast<std::size_t>(
                              cfg.stride)) == cfg.offset;
    if (!frame_on)
      for (qdh::Macroblock& mb : stream.frames[f]) mb.embeddable = false;
  }
  if (cfg.mask_path.empty()) return;

  std::ifstream in(cfg.mask_path);
  if (!in) throw qdh::IoError("cannot open mask file " + cfg.mask_path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    long frame = 0;
    long mb = 0;
    if (!(fields >> frame)) continue;  // blank line
    if (!(fields >> mb))
      throw qdh::FormatError(cfg.mask_path + ":" + std::to_string(line_no) +
                             ": expected \"frame macroblock\"");
    if (mb < 0 || mb >= stream.macroblocks_per_frame())
      throw qdh::FormatError(cfg.mask_path + ":" + std::to_string(line_no) +
                             ": macroblock index out of range");
    if (frame == -1) {
      for (auto& fr : stream.frames)
        fr[static_cast<std::size_t>(mb)].embeddable = false;
    } else if (frame >= 0 &&
               frame < static_cast<long>(stream.frames.size())) {
      stream.frames[static_cast<std::size_t>(frame)]
            [static_cast<std::size_t>(mb)].embeddable = false;
    } else {
      throw qdh::FormatError(cfg.mask_path + ":" + std::to_string(line_no) +
                             ": frame index out of range");
    }
  }
}

// Per-frame report rows for one embedding. Quality is measured between the
// decoded original and decoded marked stream, cropped to `geometry` when
// the source video was padded.
qdh::ReportSection build_section(
    const CoefficientStream& original, const qdh::StreamEmbedResult& result,
    std::optional<std::pair<int, int>> geometry) {
  qdh::ReportSection section;
  const qdh::QuantParams params(original.qp);
  for (const qdh::FrameEmbedStats& stats : result.report.frames) {
    const auto f = static_cast<std::size_t>(stats.frame);
    PixelPlane ref = qdh::decode_frame(original.frames[f], original.mb_cols,
                                       original.mb_rows, params);
    PixelPlane marked =
        qdh::decode_frame(result.stream.frames[f], original.mb_cols,
                          original.mb_rows, params);
    if (geometry) {
      ref = qdh::crop(ref, geometry->first, geometry->second);
      marked = qdh::crop(marked, geometry->first, geometry->second);
    }
    const std::int64_t cost_original = qdh::coding_cost(original.frames[f]);
    const std::int64_t cost_marked = qdh::coding_cost(result.stream.frames[f]);

    qdh::ReportRow row;
    row.frame = stats.frame;
    row.capacity_bits = stats.capacity_bits;
    row.embedded_bits = stats.payload_bits;
    const qdh::CapacityMetrics m = qdh::capacity_metrics(
        qdh::CapacityCounts{stats.embeddable_blocks, stats.zero_ac15,
                            stats.paired_zero_ac15},
        stats.payload_bits);
    row.cp = m.cp;
    row.full = m.full;
    row.ec = m.ec;
    row.psnr_db = qdh::psnr(ref, marked);
    row.cost_original = cost_original;
    row.cost_marked = cost_marked;
    row.bir = 100.0 * qdh::bir(static_cast<double>(cost_original),
                               static_cast<double>(cost_marked));
    section.rows.push_back(row);
  }
  return section;
}

void emit_report(const qdh::Report& report, const std::string& path) {
  if (path.empty())
    qdh::write_report_csv(std::cout, report);
  else
    qdh::write_report_files(path, report);
}

std::vector<std::uint8_t> seeded_payload(std::mt19937_64& rng,
                                         std::size_t size) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> payload(size);
  for (auto& b : payload) b = static_cast<std::uint8_t>(byte(rng));
  return payload;
}

// ---------------------------------------------------------------------
// subcommands

int cmd_encode(const std::string& input, const std::string& output,
               const std::string& size, int qp) {
  const VideoSequence video = load_video(input, size);
  const CoefficientStream stream = qdh::encode_planes(video.frames, qp);
  qdh::write_sidecar_file(output, stream);
  std::cout << "encoded " << stream.frames.size() << " frames, "
            << stream.mb_cols << "x" << stream.mb_rows << " macroblocks ("
            << video.width << "x" << video.height << "), qp " << stream.qp
            << " -> " << output << "\n";
  return 0;
}

int cmd_embed(const std::string& input, const std::string& payload_path,
              const std::string& output, const std::string& report_path,
              const RunConfig& cfg) {
  CoefficientStream stream = qdh::read_sidecar_file(input);
  if (stream.marked)
    throw std::invalid_argument(input + " is already marked");
  apply_run_config(stream, cfg);

  const std::vector<std::uint8_t> payload = read_binary_file(payload_path);
  const auto result = qdh::embed_stream(stream, payload);
  qdh::write_sidecar_file(output, result.stream);

  std::cout << "embedded " << payload.size() << " payload bytes ("
            << result.report.frame_bits << " framed bits) into capacity "
            << result.report.capacity_bits << " bits -> " << output << "\n"
            << "payload fnv1a64 " << hex64(fnv1a64(payload)) << "\n";

  if (!report_path.empty()) {
    qdh::Report report;
    report.notes = {{"command", "embed"},
                    {"qp", std::to_string(stream.qp)},
                    {"payload_bytes", std::to_string(payload.size())}};
    report.sections.push_back(build_section(stream, result, std::nullopt));
    emit_report(report, report_path);
  }
  return 0;
}

int cmd_extract(const std::string& input, const std::string& payload_path,
                const std::string& output, const RunConfig& cfg) {
  CoefficientStream stream = qdh::read_sidecar_file(input);
  if (!stream.marked)
    throw std::invalid_argument(input + " is not marked; nothing to extract");
  apply_run_config(stream, cfg);

  const auto result = qdh::extract_stream(stream);
  write_binary_file(payload_path, result.payload);
  if (!output.empty()) {
    CoefficientStream restored = result.stream;
    // The sidecar stores no embeddability, reset to the default view.
    for (auto& frame : restored.frames)
      for (qdh::Macroblock& mb : frame) mb.embeddable = true;
    qdh::write_sidecar_file(output, restored);
  }
  std::cout << "extracted " << result.payload.size() << " payload bytes -> "
            << payload_path << "\n"
            << "payload fnv1a64 " << hex64(fnv1a64(result.payload)) << "\n";
  return 0;
}

int cmd_verify(const std::string& input, const std::string& payload_path,
               const std::string& size, const RunConfig& cfg) {
  CoefficientStream stream;
  if (sniff_sidecar(input)) {
    stream = qdh::read_sidecar_file(input);
    if (stream.marked)
      throw std::invalid_argument(input + " is already marked");
  } else {
    stream = qdh::encode_planes(load_video(input, size).frames, cfg.qp);
  }
  apply_run_config(stream, cfg);

  const std::int64_t cap = qdh::capacity(stream);
  std::vector<std::uint8_t> payload;
  if (!payload_path.empty()) {
    payload = read_binary_file(payload_path);
  } else if (cap >= 32) {
    std::mt19937_64 rng(cfg.seed);
    payload = seeded_payload(rng, static_cast<std::size_t>((cap - 32) / 8));
  }

  const auto embedded = qdh::embed_stream(stream, payload);
  const auto extracted = qdh::extract_stream(embedded.stream);
  const bool payload_ok = extracted.payload == payload;
  const bool stream_ok = extracted.stream == stream;

  std::cout << "capacity " << cap << " bits, payload " << payload.size()
            << " bytes\n"
            << "payload fnv1a64 in  " << hex64(fnv1a64(payload)) << "\n"
            << "payload fnv1a64 out " << hex64(fnv1a64(extracted.payload))
            << "\n";
  if (!payload_ok || !stream_ok)
    throw qdh::FormatError(std::string("verify failed: ") +
                           (payload_ok ? "" : "payload mismatch ") +
                           (stream_ok ? "" : "stream mismatch"));
  std::cout << "verify OK: payload and coefficients restored exactly\n";
  return 0;
}

int cmd_analyze(const std::string& input, std::vector<int> sizes,
                const std::string& size, const std::string& report_path,
                const RunConfig& cfg) {
  CoefficientStream stream;
  std::optional<std::pair<int, int>> geometry;
  if (sniff_sidecar(input)) {
    stream = qdh::read_sidecar_file(input);
    if (stream.marked)
      throw std::invalid_argument(input + " is already marked");
  } else {
    const VideoSequence video = load_video(input, size);
    stream = qdh::encode_planes(video.frames, cfg.qp);
    geometry = {{video.width, video.height}};
  }
  apply_run_config(stream, cfg);

  if (sizes.empty()) sizes = {250, 500, 750, 1000, 1250};
  const std::int64_t cap = qdh::capacity(stream);

  qdh::Report report;
  report.notes = {{"command", "analyze"},
                  {"input", input},
                  {"qp", std::to_string(stream.qp)},
                  {"seed", std::to_string(cfg.seed)},
                  {"capacity_bits", std::to_string(cap)}};

  std::mt19937_64 rng(cfg.seed);
  for (int payload_bits : sizes) {
    if (payload_bits < 0)
      throw std::invalid_argument("payload sizes must be nonnegative");
    const auto bytes = static_cast<std::size_t>((payload_bits + 7) / 8);
    qdh::ReportSection section;
    section.notes = {{"payload_bits_requested", std::to_string(payload_bits)},
                     {"payload_bytes", std::to_string(bytes)}};
    const std::int64_t required = 32 + 8 * static_cast<std::int64_t>(bytes);
    if (required > cap) {
      section.notes.emplace_back(
          "skipped", "required " + std::to_string(required) +
                         " bits exceed capacity " + std::to_string(cap));
      report.sections.push_back(section);
      continue;
    }
    const auto payload = seeded_payload(rng, bytes);
    const auto result = qdh::embed_stream(stream, payload);
    qdh::ReportSection rows = build_section(stream, result, geometry);
    rows.notes = section.notes;
    report.sections.push_back(rows);
  }
  emit_report(report, report_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "reversible data hiding in zero coefficient-pairs of quantized "
      "4x4 transform blocks"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string input;
  std::string output;
  std::string payload_path;
  std::string report_path;
  std::string size_text;
  std::vector<int> sizes;

  const auto add_config = [&cfg](CLI::App* cmd, bool with_seed) {
    cmd->add_option("--stride", cfg.stride,
                    "embed only in frames with index % stride == offset")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--offset", cfg.offset, "frame offset for --stride")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--mask", cfg.mask_path,
                    "file of \"frame macroblock\" lines to exclude "
                    "(frame -1 = every frame)")
        ->check(CLI::ExistingFile);
    if (with_seed)
      cmd->add_option("--seed", cfg.seed, "payload generator seed");
  };

  CLI::App* encode =
      app.add_subcommand("encode", "encode Y4M/raw video into a sidecar");
  encode->add_option("input", input, "Y4M or raw YUV 4:2:0 video")
      ->required()
      ->check(CLI::ExistingFile);
  encode->add_option("output", output, "sidecar path");
  encode->add_option("--out", output, "sidecar path");
  encode->add_option("--qp", cfg.qp, "quantization parameter")
      ->check(CLI::Range(0, 51));
  encode->add_option("--size", size_text, "WIDTHxHEIGHT for raw input");
  encode->callback([&] {
    if (output.empty())
      throw std::invalid_argument("encode needs an output path (--out)");
    cmd_encode(input, output, size_text, cfg.qp);
  });

  CLI::App* embed =
      app.add_subcommand("embed", "embed a payload file into a sidecar");
  embed->add_option("input", input, "unmarked sidecar")
      ->required()
      ->check(CLI::ExistingFile);
  embed->add_option("--payload", payload_path, "payload file")
      ->required()
      ->check(CLI::ExistingFile);
  embed->add_option("--out", output, "marked sidecar path")->required();
  embed->add_option("--report", report_path, "per-frame CSV (+.json) path");
  add_config(embed, false);
  embed->callback(
      [&] { cmd_embed(input, payload_path, output, report_path, cfg); });

  CLI::App* extract = app.add_subcommand(
      "extract", "extract the payload and restore the sidecar");
  extract->add_option("input", input, "marked sidecar")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("--payload", payload_path, "payload output path")
      ->required();
  extract->add_option("--out", output, "restored sidecar path");
  add_config(extract, false);
  extract->callback([&] { cmd_extract(input, payload_path, output, cfg); });

  CLI::App* verify = app.add_subcommand(
      "verify", "embed, extract, and compare in one pass");
  verify->add_option("input", input, "sidecar or video")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--payload", payload_path,
                     "payload file (default: seeded random fill)")
      ->check(CLI::ExistingFile);
  verify->add_option("--qp", cfg.qp, "quantization parameter for video input")
      ->check(CLI::Range(0, 51));
  verify->add_option("--size", size_text, "WIDTHxHEIGHT for raw input");
  add_config(verify, true);
  verify->callback([&] { cmd_verify(input, payload_path, size_text, cfg); });

  CLI::App* analyze = app.add_subcommand(
      "analyze", "sweep payload sizes and report quality/rate metrics");
  analyze->add_option("input", input, "sidecar or video")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--sizes", sizes, "payload sizes in bits")
      ->delimiter(',');
  analyze->add_option("--qp", cfg.qp, "quantization parameter for video input")
      ->check(CLI::Range(0, 51));
  analyze->add_option("--size", size_text, "WIDTHxHEIGHT for raw input");
  analyze->add_option("--report", report_path,
                      "CSV (+.json) path; stdout when omitted");
  add_config(analyze, true);
  analyze->callback(
      [&] { cmd_analyze(input, sizes, size_text, report_path, cfg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const qdh::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qdh::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const qdh::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
