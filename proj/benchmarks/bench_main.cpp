// Microbenchmarks for the hot paths: fixation detection, selector ranking,
// classifier training, one LOOCV evaluation, and telemetry CSV parsing.
#include <benchmark/benchmark.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "skyselect/classifiers.hpp"
#include "skyselect/evaluation.hpp"
#include "skyselect/eye_features.hpp"
#include "skyselect/feature_select.hpp"
#include "skyselect/rng.hpp"
#include "skyselect/synth.hpp"
#include "skyselect/telemetry.hpp"

namespace {

using namespace skyselect;

// Jittered 120 Hz gaze: mostly dwell with occasional large jumps, so the
// detector sees a realistic mix of runs and breaks.
GazeStream synthetic_gaze(size_t samples, uint64_t seed) {
  Rng rng(seed);
  GazeStream g(samples);
  double az = 0.0, el = 0.0;
  for (size_t i = 0; i < samples; ++i) {
    if (rng.uniform() < 0.01) {
      az += rng.normal(0.0, 0.3);
      el += rng.normal(0.0, 0.2);
    }
    const double a = az + rng.normal(0.0, 0.0005), e = el + rng.normal(0.0, 0.0005);
    GazeSample& s = g[i];
    s.t = static_cast<double>(i) / 120.0;
    s.dir_left = {std::sin(a) * std::cos(e), std::sin(e), std::cos(a) * std::cos(e)};
    s.dir_right = s.dir_left;
    s.eye_open_left = s.eye_open_right = 1.0;
  }
  return g;
}

// Cohort-shaped matrix: 63 noisy columns, a handful carrying class signal.
FeatureMatrix synthetic_matrix(size_t rows, uint64_t seed) {
  Rng rng(seed);
  FeatureMatrix m;
  const size_t d = 63;
  for (size_t c = 0; c < d; ++c) m.columns.push_back("f" + std::to_string(c));
  for (size_t r = 0; r < rows; ++r) {
    const int lab = r % 2 == 0 ? 1 : 0;
    m.ids.push_back("p" + std::to_string(r));
    m.labels.push_back(lab);
    for (size_t c = 0; c < d; ++c) {
      const double shift = c % 9 == 0 ? (lab ? 1.2 : -1.2) : 0.0;
      m.values.push_back(shift + rng.normal());
    }
  }
  return m;
}

void BM_FixationDetection(benchmark::State& state) {
  const GazeStream g = synthetic_gaze(static_cast<size_t>(state.range(0)), 17);
  for (auto _ : state) {
    FixationResult r = detect_fixations(g);
    benchmark::DoNotOptimize(r.fixations.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FixationDetection)->Arg(10000)->Arg(100000);

void BM_MicRanking(benchmark::State& state) {
  const FeatureMatrix m = synthetic_matrix(46, 23);
  for (auto _ : state) {
    RankedFeatures r = mic_rank(m);
    benchmark::DoNotOptimize(r.order.data());
  }
}
BENCHMARK(BM_MicRanking);

void BM_SvmRfeRanking(benchmark::State& state) {
  const FeatureMatrix m = synthetic_matrix(46, 29);
  for (auto _ : state) {
    RankedFeatures r = svm_rfe_rank(m);
    benchmark::DoNotOptimize(r.order.data());
  }
}
BENCHMARK(BM_SvmRfeRanking);

void BM_SvmTrain(benchmark::State& state) {
  const FeatureMatrix m = synthetic_matrix(45, 31);
  for (auto _ : state) {
    auto model = SvmModel::train(m, {});
    benchmark::DoNotOptimize(model->bias());
  }
}
BENCHMARK(BM_SvmTrain);

void BM_LoocvCell(benchmark::State& state) {
  const FeatureMatrix m = synthetic_matrix(46, 37);
  LoocvOptions opts;
  opts.selector = SelectorKind::kMic;
  opts.model = ModelKind::kSvm;
  opts.proportion = 0.65;
  for (auto _ : state) {
    EvalReport r = loocv(m, opts);
    benchmark::DoNotOptimize(r.metrics.acc);
  }
}
BENCHMARK(BM_LoocvCell)->Unit(benchmark::kMillisecond);

void BM_GazeLogParse(benchmark::State& state) {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "skyselect_bench_gaze.csv";
  write_gaze_log(path.string(), synthetic_gaze(50000, 41));
  for (auto _ : state) {
    GazeStream g = parse_gaze_log(path.string());
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * 50000);
  fs::remove(path);
}
BENCHMARK(BM_GazeLogParse);

}  // namespace

BENCHMARK_MAIN();
