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


#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lcd/gait_sim.hpp"
#include "lcd/labeler.hpp"
#include "lcd/preprocess.hpp"
#include "lcd/sensor_model.hpp"
#include "test_support.hpp"

namespace lcd {
namespace {

using lcd::testing::error_kind_of;

Stream constant_stream(std::size_t ticks, double rate, const Channels& x) {
  Stream s;
  for (std::size_t i = 0; i < ticks; ++i) {
    for (Leg leg : kLegs) s.push_back({static_cast<double>(i) / rate, leg, x, kUnlabeled, Substate::kNoContact});
  }
  return s;
}

struct Simulated {
  RobotParams params;
  std::vector<GroundTruthFrame> frames;
  Stream stream;
};

Simulated simulate(const SensorNoiseParams& noise, int steps = 8) {
  Simulated out;
  out.params = robot_preset("atlas-like");
  out.frames = generate_gait_dataset(out.params, mixed_terrain(0.05, 1.2, 30.0, 3), steps, 3);
  out.stream = to_stream(simulate_sensors(out.frames, noise, out.params.sensor_rate, 4));
  attach_labels(out.stream, label_dataset(out.frames, out.params));
  return out;
}

TEST(BiasGravity, ZeroNoiseRoundTripRecoversTruth) {
  auto sim = simulate(SensorNoiseParams::zero());
  // A constant offset on every channel must come out too.
  Stream biased = sim.stream;
  for (auto& s : biased) {
    for (std::size_t c = 0; c < kNumChannels; ++c) s.x[c] += 0.25 * static_cast<double>(c + 1);
  }
  for (const Stream* input : {&sim.stream, &biased}) {
    const auto out = remove_bias_and_gravity(*input, 1000, sim.frames);
    ASSERT_EQ(out.size(), input->size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& f = sim.frames[i / 2];
      const auto& foot = f.foot(out[i].leg);
      const Mat3 r = foot.world_to_foot();
      const Channels truth = to_channels(f.wrench_of(out[i].leg), {r * foot.lin_acc, r * foot.ang_vel});
      for (std::size_t c = 0; c < kNumChannels; ++c) {
        ASSERT_NEAR(out[i].x[c], truth[c], 1e-12) << "row " << i << " channel " << c;
      }
    }
  }
}

TEST(BiasGravity, StaticStreamHasZeroAcceleration) {
  Channels x{};
  x[2] = 850.0;
  x[6] = 0.3;
  x[8] = 9.81;
  const auto out = remove_bias_and_gravity(constant_stream(300, 100.0, x), 200);
  for (const auto& s : out) {
    for (int c = 6; c < 9; ++c) ASSERT_NEAR(s.x[c], 0.0, 1e-12);
    ASSERT_EQ(s.x[kChannelFz], 850.0);  // the static load survives
  }
}

TEST(BiasGravity, InjectedForceBiasRemoved) {
  const std::size_t window = 200;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> noise(0.0, 0.7);
  Stream clean;
  for (std::size_t i = 0; i < 1000; ++i) {
    for (Leg leg : kLegs) {
      Sample s{static_cast<double>(i) / 100.0, leg, {}, kUnlabeled, Substate::kNoContact};
      s.x[0] = noise(rng);
      s.x[2] = 500.0 + noise(rng);
      clean.push_back(s);
    }
  }
  Stream biased = clean;
  for (auto& s : biased) s.x[0] += 0.5;
  const double tol = 4.0 * 0.7 / std::sqrt(double(window));
  const auto out = remove_bias_and_gravity(biased, window);
  const auto identity = remove_bias_and_gravity(clean, window);
  for (std::size_t i = 0; i < out.size(); ++i) {
    ASSERT_LT(std::abs((biased[i].x[0] - out[i].x[0]) - 0.5), tol);
    ASSERT_LT(std::abs(identity[i].x[0] - clean[i].x[0]), tol);
  }
}

TEST(BiasGravity, Errors) {
  const auto s = constant_stream(10, 100.0, Channels{});
  EXPECT_EQ(error_kind_of([&] { remove_bias_and_gravity(s, 0); }), ErrorKind::kInput);
  EXPECT_EQ(error_kind_of([&] { remove_bias_and_gravity(s, 11); }), ErrorKind::kInput);
  std::vector<GroundTruthFrame> ref(3);
  EXPECT_EQ(error_kind_of([&] { remove_bias_and_gravity(s, 5, ref); }), ErrorKind::kInput);
}

TEST(Outliers, GaussianRejectionRate) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  Stream s(100000);
  for (auto& smp : s) {
    for (double& v : smp.x) v = n(rng);
  }
  const auto r = reject_outliers(s, channel_statistics(s), feature_channels(FeatureSet::kFull));
  const double expected = 1.0 - std::pow(1.0 - std::erfc(3.0 / std::sqrt(2.0)), 12);
  EXPECT_NEAR(expected, 0.03194, 5e-5);
  const double rate = static_cast<double>(r.rejected) / static_cast<double>(s.size());
  EXPECT_NEAR(rate, expected, 0.2 * expected);
  EXPECT_EQ(r.kept.size() + r.rejected, s.size());
}

TEST(Outliers, SingleSpikeDropped) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Stream s(1000);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i].t = static_cast<double>(i);
    for (double& v : s[i].x) v = u(rng);
  }
  s[321].x[4] = 20.0;
  const auto r = reject_outliers(s, channel_statistics(s), feature_channels(FeatureSet::kFull));
  ASSERT_EQ(r.rejected, 1u);
  for (const auto& k : r.kept) EXPECT_NE(k.t, 321.0);
  // Channel 4 is not a reduced feature, so the spike survives there.
  EXPECT_EQ(reject_outliers(s, channel_statistics(s), feature_channels(FeatureSet::kReduced)).rejected, 0u);
}

TEST(Outliers, ConstantStreamKeepsEverything) {
  Channels x{};
  x.fill(3.0);
  const auto s = constant_stream(100, 100.0, x);
  const auto stats = channel_statistics(s);
  EXPECT_EQ(stats.stddev[0], 0.0);
  EXPECT_EQ(reject_outliers(s, stats, feature_channels(FeatureSet::kFull)).rejected, 0u);
}

TEST(Resample, BlockMeans) {
  Stream s;
  for (int i = 0; i < 5; ++i) {
    Channels x{};
    x.fill(static_cast<double>(i + 1));
    s.push_back({i / 500.0, Leg::kLeft, x, i < 2 ? 1 : 0, i < 2 ? Substate::kStable : Substate::kSlip});
  }
  const auto out = resample_100hz(s, 500.0);
  ASSERT_EQ(out.size(), 1u);
  for (double v : out[0].x) EXPECT_EQ(v, 3.0);
  EXPECT_EQ(out[0].label, 0);
  EXPECT_EQ(out[0].substate, Substate::kSlip);
  EXPECT_EQ(out[0].t, 0.0);
}

TEST(Resample, ConstantStreamAndTimestamps) {
  Channels x{};
  x.fill(-1.25);
  const auto out = resample_100hz(constant_stream(500, 500.0, x), 500.0);
  ASSERT_EQ(out.size(), 200u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].x, x);
    EXPECT_NEAR(out[i].t, static_cast<double>(i / 2) / 100.0, 1e-15);
    EXPECT_EQ(out[i].leg, i % 2 == 0 ? Leg::kLeft : Leg::kRight);
  }
}

TEST(Resample, LabelVoteAndTies) {
  auto block = [](std::vector<int> labels, std::vector<Substate> subs) {
    Stream s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      s.push_back({static_cast<double>(i) / 500.0, Leg::kRight, {}, labels[i], subs[i]});
    }
    return resample_100hz(s, 500.0).at(0);
  };
  using S = Substate;
  auto sc_majority = block({1, 1, 1, 0, 0}, {S::kStable, S::kStable, S::kStable, S::kSlip, S::kSlip});
  EXPECT_EQ(sc_majority.label, 1);
  EXPECT_EQ(sc_majority.substate, S::kStable);
  // Four-sample partial block with a 2/2 split goes to UC; slip/no-contact tie goes to slip.
  auto tie = block({1, 1, 0, 0}, {S::kStable, S::kStable, S::kNoContact, S::kSlip});
  EXPECT_EQ(tie.label, 0);
  EXPECT_EQ(tie.substate, S::kSlip);
  auto nc = block({0, 0, 0, 1, 1}, {S::kNoContact, S::kNoContact, S::kSlip, S::kStable, S::kStable});
  EXPECT_EQ(nc.substate, S::kNoContact);
}

TEST(Resample, RateHandling) {
  const auto s = constant_stream(10, 100.0, Channels{});
  EXPECT_EQ(resample_100hz(s, 100.0), s);
  EXPECT_EQ(error_kind_of([&] { resample_100hz(s, 250.0); }), ErrorKind::kInput);
}

TEST(Normalize, Definition) {
  Eigen::MatrixXd x(3, 1);
  x << -2, 1, 2;
  NormalizationScale scale;
  const auto y = normalize_abs(x, scale, true);
  EXPECT_EQ(scale.max_abs, std::vector<double>{2.0});
  EXPECT_EQ(y(0, 0), 1.0);
  EXPECT_EQ(y(1, 0), 0.5);
  EXPECT_EQ(y(2, 0), 1.0);
  NormalizationScale flipped;
  EXPECT_EQ(normalize_abs(-x, flipped, true), y);
  EXPECT_EQ(flipped, scale);
}

TEST(Normalize, StoredScalePassesValuesAboveOne) {
  Eigen::MatrixXd x(2, 2);
  x << 4, -1, 0.5, 0.25;
  NormalizationScale scale{{2.0, 0.5}};
  const auto y = normalize_abs(x, scale, false);
  EXPECT_EQ(y(0, 0), 2.0);
  EXPECT_EQ(y(0, 1), 2.0);
  EXPECT_EQ(y(1, 1), 0.5);
  EXPECT_EQ(scale.max_abs, (std::vector<double>{2.0, 0.5}));
}

TEST(Normalize, ZeroColumnAndMismatch) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 2);
  x(1, 1) = 3.0;
  NormalizationScale scale;
  std::vector<std::string> warnings;
  const auto y = normalize_abs(x, scale, true, &warnings);
  EXPECT_EQ(scale.max_abs[0], 1.0);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_TRUE(y.allFinite());
  NormalizationScale wrong{{1.0}};
  EXPECT_EQ(error_kind_of([&] { normalize_abs(x, wrong, false); }), ErrorKind::kSchema);
}

// Property: |x| / max|x| equals |x / max|x|| for any sign pattern.
TEST(Normalize, AbsAndScaleCommute) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 5.0);
  Eigen::MatrixXd x(50, 7);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  NormalizationScale scale;
  const auto y = normalize_abs(x, scale, true);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double m = x.col(j).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < x.rows(); ++i) ASSERT_EQ(y(i, j), std::abs(x(i, j) / m));
  }
  EXPECT_LE(y.maxCoeff(), 1.0);
  EXPECT_GE(y.minCoeff(), 0.0);
}

TEST(FeatureMatrix, ShapesAndRowCorrespondence) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  Stream s;
  for (int i = 0; i < 100; ++i) {
    for (Leg leg : kLegs) {
      Sample smp{i / 100.0, leg, {}, i % 3 == 0 ? 0 : 1, Substate::kStable};
      for (double& v : smp.x) v = n(rng);
      s.push_back(smp);
    }
  }
  const auto full = build_feature_matrix(s, FeatureSet::kFull);
  const auto reduced = build_feature_matrix(s, FeatureSet::kReduced);
  EXPECT_EQ(full.x.rows(), 200);
  EXPECT_EQ(full.x.cols(), 12);
  EXPECT_EQ(reduced.x.rows(), 200);
  EXPECT_EQ(reduced.x.cols(), 7);
  const auto ch = feature_channels(FeatureSet::kReduced);
  EXPECT_EQ(std::vector<std::size_t>(ch.begin(), ch.end()),
            (std::vector<std::size_t>{2, 6, 7, 8, 9, 10, 11}));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < ch.size(); ++j) {
      ASSERT_EQ(reduced.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                std::abs(s[i].x[ch[j]]) / reduced.scale.max_abs[j]);
    }
    ASSERT_EQ(full.labels[i], s[i].label);
    ASSERT_EQ(full.fz[i], s[i].x[kChannelFz]);
    ASSERT_EQ(full.legs[i], s[i].leg);
  }
}

TEST(FeatureSetNames, RoundTrip) {
  EXPECT_EQ(parse_feature_set("reduced"), FeatureSet::kReduced);
  EXPECT_EQ(to_string(FeatureSet::kFull), "full");
  EXPECT_EQ(error_kind_of([] { parse_feature_set("tiny"); }), ErrorKind::kUsage);
}

TEST(Pipeline, DeterministicAndBounded) {
  const auto sim = simulate(SensorNoiseParams{});
  PreprocessConfig cfg;
  cfg.rate = sim.params.sensor_rate;
  const auto a = preprocess(sim.stream, cfg);
  const auto b = preprocess(sim.stream, cfg);
  EXPECT_EQ(a.matrix.x, b.matrix.x);
  EXPECT_EQ(a.matrix.labels, b.matrix.labels);
  EXPECT_EQ(a.matrix.scale, b.matrix.scale);
  EXPECT_GE(a.matrix.x.minCoeff(), 0.0);
  EXPECT_LE(a.matrix.x.maxCoeff(), 1.0);
  EXPECT_GT(a.outliers, 0u);

  // Inference keeps every row; the frozen scale may push values past one but never below zero.
  cfg.reject_outliers = false;
  const auto c = preprocess(sim.stream, cfg, &a.matrix.scale);
  EXPECT_EQ(c.matrix.rows(), 2 * ((sim.frames.size() + 4) / 5));
  EXPECT_GE(c.matrix.x.minCoeff(), 0.0);
  EXPECT_EQ(c.matrix.scale, a.matrix.scale);
  EXPECT_GT(c.matrix.rows(), a.matrix.rows());
}

TEST(Pipeline, ScaleIsFittedOnInliersEvenWhenKeepingAllRows) {
  const auto sim = simulate(SensorNoiseParams{});
  PreprocessConfig keep;
  keep.rate = sim.params.sensor_rate;
  keep.reject_outliers = false;
  PreprocessConfig drop = keep;
  drop.reject_outliers = true;
  EXPECT_EQ(preprocess(sim.stream, keep).matrix.scale, preprocess(sim.stream, drop).matrix.scale);
}

TEST(AttachLabels, CountMismatch) {
  auto s = constant_stream(3, 100.0, Channels{});
  std::vector<std::array<ContactLabel, 2>> labels(2);
  EXPECT_EQ(error_kind_of([&] { attach_labels(s, labels); }), ErrorKind::kInput);
}

}  // namespace
}  // namespace lcd
