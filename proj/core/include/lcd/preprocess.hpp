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

#ifndef LCD_PREPROCESS_HPP_
#define LCD_PREPROCESS_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lcd/common.hpp"
#include "lcd/gait_sim.hpp"
#include "lcd/labeler.hpp"
#include "lcd/sensor_model.hpp"

namespace lcd {

// Channel order: fx fy fz tx ty tz ax ay az wx wy wz.
inline constexpr std::size_t kNumChannels = 12;
inline constexpr std::size_t kChannelFz = 2;
using Channels = std::array<double, kNumChannels>;

Channels to_channels(const Wrench& w, const ImuSample& imu);

inline constexpr int kUnlabeled = -1;

// One leg-sample. Streams are ordered by time, left leg before right.
struct Sample {
  double t = 0.0;
  Leg leg = Leg::kLeft;
  Channels x{};
  int label = kUnlabeled;  // 1 SC, 0 UC
  Substate substate = Substate::kNoContact;

  bool operator==(const Sample&) const = default;
};
using Stream = std::vector<Sample>;

Stream to_stream(std::span<const SensorFrame> frames);
// Attach labels (one pair per tick) to a stream built from the same ticks.
void attach_labels(Stream& stream, std::span<const std::array<ContactLabel, 2>> labels);

enum class FeatureSet { kFull, kReduced };
std::string_view to_string(FeatureSet f);
FeatureSet parse_feature_set(std::string_view text);
// Channel indices feeding the network: all 12, or fz plus the IMU.
std::span<const std::size_t> feature_channels(FeatureSet f);
inline std::size_t feature_dim(FeatureSet f) { return feature_channels(f).size(); }

struct NormalizationScale {
  std::vector<double> max_abs;

  void validate() const;
  bool operator==(const NormalizationScale&) const = default;
};

// Subtracts per-channel biases estimated over the first `window` samples of
// each leg and removes gravity from the accelerometer. With `reference`
// (noise-free frames aligned tick by tick with the stream), biases are the
// mean deviation from the true readings and gravity is removed with the true
// foot orientation. Without it, the window mean is removed from every channel
// but fz, which keeps the static load.
Stream remove_bias_and_gravity(const Stream& stream, std::size_t window,
                               std::span<const GroundTruthFrame> reference = {});

struct ChannelStats {
  Channels mean{};
  Channels stddev{};
};
ChannelStats channel_statistics(const Stream& stream);

struct OutlierResult {
  Stream kept;
  std::size_t rejected = 0;
};
// Drops a leg-sample when any listed channel lies more than 3 sigma from its
// mean. Channels with zero spread are exempt.
OutlierResult reject_outliers(const Stream& stream, const ChannelStats& stats,
                              std::span<const std::size_t> channels);

// Non-overlapping block means down to 100 Hz. Labels go by majority vote,
// ties to UC; a UC block takes its most frequent unstable substate, ties to slip.
Stream resample_100hz(const Stream& stream, double rate);

// |x| / scale per column. Without a scale, the column max |x| is fitted; an
// all-zero column gets scale 1 and a warning.
Eigen::MatrixXd normalize_abs(const Eigen::MatrixXd& x, NormalizationScale& scale, bool fit,
                              std::vector<std::string>* warnings = nullptr);

struct FeatureMatrix {
  Eigen::MatrixXd x;  // rows = leg-samples
  std::vector<int> labels;
  std::vector<double> t;
  std::vector<Leg> legs;
  std::vector<Substate> substates;
  std::vector<double> fz;  // unnormalized vertical force, N
  FeatureSet features = FeatureSet::kFull;
  NormalizationScale scale;

  std::size_t rows() const { return static_cast<std::size_t>(x.rows()); }
};

// Selects the feature columns and applies abs + normalization, fitting the
// scale when `scale` is null.
FeatureMatrix build_feature_matrix(const Stream& stream, FeatureSet features,
                                   const NormalizationScale* scale = nullptr,
                                   std::vector<std::string>* warnings = nullptr);

struct PreprocessConfig {
  FeatureSet features = FeatureSet::kFull;
  double rate = 100.0;
  double standstill_seconds = 2.0;
  // Drop 3-sigma outliers from the output rows. A detector scoring live data
  // must answer every tick, so inference keeps them.
  bool reject_outliers = true;
};

struct PreprocessResult {
  Stream stream;  // 100 Hz rows behind the matrix
  FeatureMatrix matrix;
  std::size_t outliers = 0;  // 3-sigma outliers found, dropped or not
  std::vector<std::string> warnings;
};

// bias/gravity removal, outlier rejection, resampling, abs + normalization.
// A fitted scale always comes from the 3-sigma inliers.
PreprocessResult preprocess(const Stream& raw, const PreprocessConfig& cfg,
                            const NormalizationScale* scale = nullptr,
                            std::span<const GroundTruthFrame> reference = {});

}  // namespace lcd

#endif  // LCD_PREPROCESS_HPP_
