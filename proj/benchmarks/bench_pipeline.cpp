#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "neoburst/detector.hpp"
#include "neoburst/dsp.hpp"
#include "neoburst/features.hpp"
#include "neoburst/grader.hpp"
#include "neoburst/svm.hpp"
#include "neoburst/synth.hpp"

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 20.0);
  std::vector<double> x(n);
  for (double& v : x) v = normal(rng);
  return x;
}

void BM_BandFilter(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)) * 64, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(neoburst::band_filter(x, {3.0, 8.0}, 64.0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_BandFilter)->Arg(60)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_Preprocess(benchmark::State& state) {
  const auto x = noise(600 * 256, 2);
  const neoburst::DetectorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(neoburst::preprocess(x, 256.0, cfg));
}
BENCHMARK(BM_Preprocess)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)) * 64, 3);
  const neoburst::DetectorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(neoburst::extract_features(x, cfg));
}
BENCHMARK(BM_ExtractFeatures)->Arg(60)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_TrainSvm(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  neoburst::FeatureMatrix x({"a", "b", "c", "d", "e", "f", "g", "h"}, rows);
  std::vector<int> labels(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    labels[r] = rng() % 2 ? 1 : -1;
    for (std::size_t c = 0; c < x.cols(); ++c) x.at(r, c) = normal(rng) + 0.5 * labels[r] * (c < 3);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(neoburst::train_linear_svm(x, labels, {}));
  }
}
BENCHMARK(BM_TrainSvm)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_TrainMlp(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<neoburst::LabeledSample> data;
  for (int i = 0; i < 54; ++i) {
    const int g = 1 + i % 4;
    data.push_back({{25.0 * g + 10.0 * u(rng), 20.0 * g * g + 15.0 * u(rng)}, neoburst::HieGrade(g)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(neoburst::train_mlp(data, {}));
}
BENCHMARK(BM_TrainMlp)->Unit(benchmark::kMillisecond);

void BM_DetectSubject(benchmark::State& state) {
  std::vector<neoburst::LabeledRecording> train;
  for (int g = 1; g <= 4; ++g) {
    train.push_back(neoburst::labeled_recording(
        neoburst::generate_subject(neoburst::HieGrade(g), 600.0, 256.0, 10 + g)));
  }
  const auto model = neoburst::train_detector(train, neoburst::DetectorConfig{});
  const auto bipolar = neoburst::labeled_recording(
                           neoburst::generate_subject(neoburst::HieGrade(3), 600.0, 256.0, 99))
                           .bipolar;
  for (auto _ : state) benchmark::DoNotOptimize(neoburst::detect(model, bipolar));
}
BENCHMARK(BM_DetectSubject)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
