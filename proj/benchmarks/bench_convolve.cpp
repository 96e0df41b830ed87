#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "gstk/analysis.hpp"
#include "gstk/convolve.hpp"
#include "gstk/kernel.hpp"
#include "gstk/synth.hpp"

namespace {

gstk::Band noise_band(int side, gstk::SampleType dtype) {
  gstk::SplitMix64 rng(42);
  std::vector<std::uint16_t> s(std::size_t(side) * side);
  const auto mask = dtype == gstk::SampleType::u8 ? 0xFFu : 0xFFFFu;
  for (auto& v : s) v = static_cast<std::uint16_t>(rng.next() & mask);
  return gstk::Band(side, side, dtype, std::move(s));
}

void BM_Smooth5(benchmark::State& state) {
  const auto band = noise_band(int(state.range(0)), gstk::SampleType::u16);
  const auto kernel = gstk::smoothing_template();
  const gstk::ConvolveOptions opts{int(state.range(1)), 64};
  for (auto _ : state) {
    auto out = gstk::convolve(band, kernel, gstk::BoundaryMode::replicate, opts);
    benchmark::DoNotOptimize(out.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Smooth5)
    ->ArgsProduct({{512, 2048}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_Laplacian3(benchmark::State& state) {
  const auto band = noise_band(int(state.range(0)), gstk::SampleType::u16);
  const auto kernel = gstk::laplacian_template();
  for (auto _ : state) {
    auto out = gstk::convolve(band, kernel);
    benchmark::DoNotOptimize(out.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Laplacian3)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_Boundary(benchmark::State& state) {
  const auto band = noise_band(1024, gstk::SampleType::u8);
  const auto kernel = gstk::smoothing_template();
  const auto mode = static_cast<gstk::BoundaryMode>(state.range(0));
  for (auto _ : state) {
    auto out = gstk::convolve(band, kernel, mode);
    benchmark::DoNotOptimize(out.samples.data());
  }
}
BENCHMARK(BM_Boundary)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const auto scene = gstk::synth_scene(gstk::demo_scene_spec(7, 512, 512));
  const auto rois = gstk::sample_training_rois(scene.truth, 4, 2);
  const auto specs = gstk::fit_classes(scene.image, rois, gstk::FitRule::minmax());
  for (auto _ : state) {
    auto map = gstk::classify(scene.image, specs);
    benchmark::DoNotOptimize(map.labels.data());
  }
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
