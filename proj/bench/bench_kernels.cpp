// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "prosyn/pipeline.hpp"
#include "prosyn/pitch_tracker.hpp"
#include "prosyn/synth.hpp"

namespace {

std::vector<double> test_signal(double seconds, int fs) {
  std::vector<double> x(static_cast<std::size_t>(seconds * fs));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i) / fs;
    const double f0 = 120.0 + 40.0 * std::sin(2.0 * std::numbers::pi * 0.5 * t);
    x[i] = 0.4 * std::sin(2.0 * std::numbers::pi * f0 * t);
  }
  return x;
}

void BM_TrackPitchSerial(benchmark::State& state) {
  const auto x = test_signal(static_cast<double>(state.range(0)), 16000);
  for (auto _ : state) benchmark::DoNotOptimize(prosyn::track_pitch_serial(x, 16000));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}

void BM_TrackPitchParallel(benchmark::State& state) {
  const auto x = test_signal(static_cast<double>(state.range(0)), 16000);
  for (auto _ : state) benchmark::DoNotOptimize(prosyn::track_pitch(x, 16000));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}

const prosyn::AnalysisInput& table_input() {
  static const prosyn::AnalysisInput input = [] {
    prosyn::SynthConfig cfg;
    cfg.seed = 11;
    cfg.n_speakers = 20;
    return prosyn::synth_analysis_input(prosyn::generate(cfg));
  }();
  return input;
}

void BM_RunTable(benchmark::State& state) {
  const auto& input = table_input();
  prosyn::TableOptions options;
  options.workers = static_cast<int>(state.range(0));
  const std::vector<prosyn::Outcome> outcomes(prosyn::kAllOutcomes.begin(),
                                              prosyn::kAllOutcomes.end());
  for (auto _ : state)
    benchmark::DoNotOptimize(prosyn::run_table(prosyn::table1_presets(), outcomes, input, options));
}

}  // namespace

BENCHMARK(BM_TrackPitchSerial)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrackPitchParallel)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunTable)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
