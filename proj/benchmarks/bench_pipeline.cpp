#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qdh/metrics.hpp"
#include "qdh/io_formats.hpp"
#include "qdh/rdh_engine.hpp"
#include "qdh/transform_quant.hpp"
#include "support/test_util.hpp"

namespace {

qdh::CoefficientStream qcif_stream(int frames) {
  std::vector<qdh::PixelPlane> planes;
  for (int i = 0; i < frames; ++i)
    planes.push_back(testutil::synthetic_plane(176, 144, i));
  return qdh::encode_planes(planes, 28);
}

void BM_EncodeFrameQcif(benchmark::State& state) {
  const qdh::PixelPlane plane = testutil::synthetic_plane(176, 144, 0);
  const qdh::QuantParams params(28);
  for (auto _ : state)
    benchmark::DoNotOptimize(qdh::encode_frame(plane, params));
}
BENCHMARK(BM_EncodeFrameQcif);

void BM_DecodeFrameQcif(benchmark::State& state) {
  const qdh::PixelPlane plane = testutil::synthetic_plane(176, 144, 0);
  const qdh::QuantParams params(28);
  const auto frame = qdh::encode_frame(plane, params);
  for (auto _ : state)
    benchmark::DoNotOptimize(qdh::decode_frame(frame, 11, 9, params));
}
BENCHMARK(BM_DecodeFrameQcif);

void BM_EmbedStream(benchmark::State& state) {
  const auto stream = qcif_stream(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(7);
  const auto payload = testutil::random_payload(
      rng, static_cast<std::size_t>((qdh::capacity(stream) - 32) / 8));
  for (auto _ : state)
    benchmark::DoNotOptimize(qdh::embed_stream(stream, payload));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(stream.frames.size()) *
                          stream.macroblocks_per_frame());
}
BENCHMARK(BM_EmbedStream)->Arg(1)->Arg(10);

void BM_ExtractStream(benchmark::State& state) {
  const auto stream = qcif_stream(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(7);
  const auto payload = testutil::random_payload(
      rng, static_cast<std::size_t>((qdh::capacity(stream) - 32) / 8));
  const auto embedded = qdh::embed_stream(stream, payload);
  for (auto _ : state)
    benchmark::DoNotOptimize(qdh::extract_stream(embedded.stream));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(stream.frames.size()) *
                          stream.macroblocks_per_frame());
}
BENCHMARK(BM_ExtractStream)->Arg(1)->Arg(10);

void BM_CodingCostStream(benchmark::State& state) {
  const auto stream = qcif_stream(5);
  for (auto _ : state) benchmark::DoNotOptimize(qdh::coding_cost(stream));
}
BENCHMARK(BM_CodingCostStream);

void BM_SidecarRoundTrip(benchmark::State& state) {
  const auto stream = qcif_stream(5);
  for (auto _ : state) {
    const auto bytes = qdh::write_sidecar(stream);
    benchmark::DoNotOptimize(qdh::read_sidecar(bytes));
  }
}
BENCHMARK(BM_SidecarRoundTrip);

}  // namespace

BENCHMARK_MAIN();
