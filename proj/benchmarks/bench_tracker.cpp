#include <benchmark/benchmark.h>

#include <random>

#include "c2f/bench.hpp"
#include "c2f/dcf.hpp"
#include "c2f/localizer.hpp"
#include "c2f/tracker.hpp"

namespace {

c2f::FeatureStack random_stack(int channels, int rows, int cols, std::uint64_t seed) {
  c2f::FeatureStack s(channels, rows, cols);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  for (auto& v : s.data) v = d(rng);
  return s;
}

void BM_detect(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  const c2f::FeatureStack x = random_stack(9, grid, grid, 1);
  const auto spectra = c2f::to_spectrum(x);
  c2f::SampleMemory memory(5);
  c2f::update_memory(memory, c2f::to_spectrum(random_stack(9, grid, grid, 2)), 0.02);
  const c2f::GaussianLabel label = c2f::gaussian_label(grid, grid, 2.0, 0, 0);
  const c2f::FrequencyFilter filter = c2f::train_filter(memory, label, c2f::DcfConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(c2f::detect(filter, spectra));
}
BENCHMARK(BM_detect)->Arg(16)->Arg(32);

void BM_train_filter(benchmark::State& state) {
  const int grid = 32;
  c2f::SampleMemory memory(30);
  for (int j = 0; j < 30; ++j)
    c2f::update_memory(memory, c2f::to_spectrum(random_stack(9, grid, grid, j)), 0.02);
  const c2f::GaussianLabel label = c2f::gaussian_label(grid, grid, 2.0, 0, 0);
  c2f::DcfConfig config;
  c2f::FrequencyFilter warm = c2f::train_filter(memory, label, config);
  const int budget = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(c2f::train_filter(memory, label, config, &warm, budget));
}
BENCHMARK(BM_train_filter)->Arg(5)->Arg(50);

void BM_proi_pool(benchmark::State& state) {
  const c2f::FeatureStack s = random_stack(9, 32, 32, 3);
  const c2f::BoundingBox box(8.3, 9.1, 12.4, 11.7);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(c2f::proi_pool(s, box, k));
}
BENCHMARK(BM_proi_pool)->Arg(3)->Arg(5);

void BM_tracker_step(benchmark::State& state) {
  c2f::SynthSpec spec;
  spec.width = 240;
  spec.height = 160;
  spec.frame_count = 2;
  spec.target_x = 100;
  spec.target_y = 60;
  spec.target_w = 32;
  spec.target_h = 32;
  const c2f::Sequence seq = c2f::synth_sequence(spec);
  c2f::Tracker tracker(seq.frame(0), seq.ground_truth[0], c2f::TrackerConfig{});
  const c2f::Frame frame = seq.frame(1);
  for (auto _ : state) benchmark::DoNotOptimize(tracker.step(frame));
}
BENCHMARK(BM_tracker_step);

}  // namespace

BENCHMARK_MAIN();
