// Copyright 2026 The LCD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "lcd/baselines.hpp"
#include "lcd/gait_sim.hpp"
#include "lcd/labeler.hpp"
#include "lcd/mlp.hpp"
#include "lcd/preprocess.hpp"
#include "lcd/sensor_model.hpp"

namespace lcd {
namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// Simulator throughput, reported per generated frame.
void BM_SimulateWalk(benchmark::State& state) {
  const RobotParams p = robot_preset("atlas-like");
  const Terrain terrain = mixed_terrain(0.05, 1.2, 60.0, 1);
  const int steps = static_cast<int>(state.range(0));
  std::size_t frames = 0;
  for (auto _ : state) {
    const auto out = generate_gait_dataset(p, terrain, steps, 1);
    frames += out.size();
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(frames));
}
BENCHMARK(BM_SimulateWalk)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_LabelAndSense(benchmark::State& state) {
  const RobotParams p = robot_preset("atlas-like");
  const auto frames = generate_gait_dataset(p, mixed_terrain(0.05, 1.2, 60.0, 1), 20, 1);
  for (auto _ : state) {
    const auto labels = label_dataset(frames, p);
    const auto sensors = simulate_sensors(frames, SensorNoiseParams{}, p.sensor_rate, 2);
    benchmark::DoNotOptimize(labels.data());
    benchmark::DoNotOptimize(sensors.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * frames.size()));
}
BENCHMARK(BM_LabelAndSense)->Unit(benchmark::kMillisecond);

void BM_Preprocess(benchmark::State& state) {
  const RobotParams p = robot_preset("atlas-like");
  const auto frames = generate_gait_dataset(p, uniform_terrain(0.2), 20, 1);
  Stream raw = to_stream(simulate_sensors(frames, SensorNoiseParams{}, p.sensor_rate, 2));
  attach_labels(raw, label_dataset(frames, p));
  PreprocessConfig cfg;
  cfg.rate = p.sensor_rate;
  for (auto _ : state) {
    const auto out = preprocess(raw, cfg);
    benchmark::DoNotOptimize(out.matrix.x.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * raw.size()));
}
BENCHMARK(BM_Preprocess)->Unit(benchmark::kMillisecond);

void BM_MlpForward(benchmark::State& state) {
  const MlpModel m = init_model(NetworkConfig{}, FeatureSet::kFull, 3);
  const Eigen::MatrixXd x = random_matrix(12, state.range(0), 4);
  for (auto _ : state) {
    const Eigen::MatrixXd p = forward(m, x, Mode::kInfer, nullptr, nullptr);
    benchmark::DoNotOptimize(p.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(16)->Arg(256);

void BM_MlpTrainStep(benchmark::State& state) {
  MlpModel m = init_model(NetworkConfig{}, FeatureSet::kFull, 3);
  const Eigen::MatrixXd x = random_matrix(12, state.range(0), 4);
  std::vector<int> y(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<int>(i % 2);
  AdamState adam = AdamState::for_model(m, AdamConfig{});
  std::mt19937_64 rng(5);
  ForwardCache cache;
  for (auto _ : state) {
    forward(m, x, Mode::kTrain, &rng, &cache);
    adam_step(m, backward(m, cache, y), adam);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpTrainStep)->Arg(16)->Arg(128);

void BM_FcmFit(benchmark::State& state) {
  const Eigen::MatrixXd batch = random_matrix(state.range(0), 12, 6);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const FcmFit fit = fcm_fit(batch, FcmConfig{}, ++seed);
    benchmark::DoNotOptimize(fit.model.centers.data());
  }
}
BENCHMARK(BM_FcmFit)->Arg(20)->Arg(200);

void BM_Schmitt(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 800.0);
  std::vector<double> fz(100000);
  for (auto& v : fz) v = u(rng);
  for (auto _ : state) {
    const auto out = schmitt_detect(fz, {200.0, 400.0, 0});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * fz.size()));
}
BENCHMARK(BM_Schmitt);

}  // namespace
}  // namespace lcd

BENCHMARK_MAIN();
