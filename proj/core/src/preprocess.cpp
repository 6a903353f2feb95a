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

#include "lcd/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lcd/error.hpp"

namespace lcd {

namespace {

constexpr std::array<std::size_t, 12> kFullChannels = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
constexpr std::array<std::size_t, 7> kReducedChannels = {2, 6, 7, 8, 9, 10, 11};

// Noise-free reading a sensor would report for this frame, with and without
// the gravity term on the accelerometer.
Channels true_reading(const GroundTruthFrame& f, Leg leg, bool with_gravity) {
  const FootState& foot = f.foot(leg);
  const Mat3 r = foot.world_to_foot();
  ImuSample imu;
  imu.acc = r * foot.lin_acc;
  if (with_gravity) imu.acc += gravity_reading(r);
  imu.gyro = r * foot.ang_vel;
  return to_channels(f.wrench_of(leg), imu);
}

struct Block {
  long long index = -1;
  Channels sum{};
  int count = 0;
  int sc = 0;
  int uc = 0;
  int slip = 0;
  int no_contact = 0;
};

Sample flush(const Block& b, Leg leg) {
  Sample s;
  s.t = static_cast<double>(b.index) / 100.0;
  s.leg = leg;
  for (std::size_t c = 0; c < kNumChannels; ++c) s.x[c] = b.sum[c] / b.count;
  if (b.sc + b.uc > 0) {
    if (b.sc > b.uc) {
      s.label = 1;
      s.substate = Substate::kStable;
    } else {
      s.label = 0;
      s.substate = b.slip >= b.no_contact ? Substate::kSlip : Substate::kNoContact;
    }
  }
  return s;
}

}  // namespace

Channels to_channels(const Wrench& w, const ImuSample& imu) {
  return {w.force.x(),  w.force.y(),  w.force.z(),  w.torque.x(), w.torque.y(), w.torque.z(),
          imu.acc.x(),  imu.acc.y(),  imu.acc.z(),  imu.gyro.x(), imu.gyro.y(), imu.gyro.z()};
}

Stream to_stream(std::span<const SensorFrame> frames) {
  Stream out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    Sample s;
    s.t = f.t;
    s.leg = f.leg;
    s.x = to_channels(f.wrench, f.imu);
    out.push_back(s);
  }
  return out;
}

void attach_labels(Stream& stream, std::span<const std::array<ContactLabel, 2>> labels) {
  if (stream.size() != 2 * labels.size()) {
    fail(ErrorKind::kInput, "label count does not match the stream");
  }
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const ContactLabel& l = labels[i / 2][index(stream[i].leg)];
    stream[i].label = l.y_sc;
    stream[i].substate = l.substate;
  }
}

std::string_view to_string(FeatureSet f) { return f == FeatureSet::kFull ? "full" : "reduced"; }

FeatureSet parse_feature_set(std::string_view text) {
  if (text == "full") return FeatureSet::kFull;
  if (text == "reduced") return FeatureSet::kReduced;
  fail(ErrorKind::kUsage, "unknown feature set '" + std::string(text) + "'");
}

std::span<const std::size_t> feature_channels(FeatureSet f) {
  if (f == FeatureSet::kFull) return kFullChannels;
  return kReducedChannels;
}

void NormalizationScale::validate() const {
  for (double s : max_abs) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      fail(ErrorKind::kFormat, "normalization scale entries must be positive and finite");
    }
  }
}

Stream remove_bias_and_gravity(const Stream& stream, std::size_t window,
                               std::span<const GroundTruthFrame> reference) {
  if (window == 0) fail(ErrorKind::kInput, "standstill window must be positive");
  const bool use_ref = !reference.empty();
  if (use_ref && stream.size() != 2 * reference.size()) {
    fail(ErrorKind::kInput, "reference frames are not aligned with the stream");
  }
  auto reference_frame = [&](std::size_t i) -> const GroundTruthFrame& { return reference[i / 2]; };

  std::array<Channels, 2> bias{};
  std::array<std::size_t, 2> seen{};
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const Sample& s = stream[i];
    auto& n = seen[index(s.leg)];
    if (n >= window) continue;
    ++n;
    const Channels expected =
        use_ref ? true_reading(reference_frame(i), s.leg, true) : Channels{};
    for (std::size_t c = 0; c < kNumChannels; ++c) bias[index(s.leg)][c] += s.x[c] - expected[c];
  }
  if (seen[0] < window || seen[1] < window) {
    fail(ErrorKind::kInput, "standstill window is longer than the stream");
  }
  for (auto& b : bias) {
    for (double& v : b) v /= static_cast<double>(window);
    if (!use_ref) b[kChannelFz] = 0.0;
  }

  Stream out = stream;
  for (std::size_t i = 0; i < out.size(); ++i) {
    Sample& s = out[i];
    const Channels& b = bias[index(s.leg)];
    for (std::size_t c = 0; c < kNumChannels; ++c) s.x[c] -= b[c];
    if (use_ref) {
      const Vec3 g = gravity_reading(reference_frame(i).foot(s.leg).world_to_foot());
      for (int k = 0; k < 3; ++k) s.x[6 + k] -= g[k];
    }
  }
  return out;
}

ChannelStats channel_statistics(const Stream& stream) {
  ChannelStats st;
  if (stream.empty()) return st;
  const double n = static_cast<double>(stream.size());
  for (const auto& s : stream) {
    for (std::size_t c = 0; c < kNumChannels; ++c) st.mean[c] += s.x[c];
  }
  for (double& m : st.mean) m /= n;
  for (const auto& s : stream) {
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      const double d = s.x[c] - st.mean[c];
      st.stddev[c] += d * d;
    }
  }
  for (double& v : st.stddev) v = std::sqrt(v / n);
  return st;
}

OutlierResult reject_outliers(const Stream& stream, const ChannelStats& stats,
                              std::span<const std::size_t> channels) {
  OutlierResult r;
  r.kept.reserve(stream.size());
  for (const auto& s : stream) {
    bool outlier = false;
    for (std::size_t c : channels) {
      if (stats.stddev[c] > 0.0 && std::abs(s.x[c] - stats.mean[c]) > 3.0 * stats.stddev[c]) {
        outlier = true;
        break;
      }
    }
    if (outlier) {
      ++r.rejected;
    } else {
      r.kept.push_back(s);
    }
  }
  return r;
}

Stream resample_100hz(const Stream& stream, double rate) {
  if (rate == 100.0) return stream;
  if (rate != 500.0) fail(ErrorKind::kInput, "unsupported sample rate " + std::to_string(rate));
  constexpr long long kFactor = 5;
  Stream out;
  out.reserve(stream.size() / kFactor + 2);
  std::array<Block, 2> blocks;
  for (const auto& s : stream) {
    Block& b = blocks[index(s.leg)];
    const long long block = std::llround(s.t * rate) / kFactor;
    if (block != b.index) {
      if (b.count > 0) out.push_back(flush(b, s.leg));
      b = Block{};
      b.index = block;
    }
    for (std::size_t c = 0; c < kNumChannels; ++c) b.sum[c] += s.x[c];
    ++b.count;
    if (s.label == 1) ++b.sc;
    if (s.label == 0) {
      ++b.uc;
      if (s.substate == Substate::kSlip) ++b.slip;
      if (s.substate == Substate::kNoContact) ++b.no_contact;
    }
  }
  for (Leg leg : kLegs) {
    if (blocks[index(leg)].count > 0) out.push_back(flush(blocks[index(leg)], leg));
  }
  std::stable_sort(out.begin(), out.end(), [](const Sample& a, const Sample& b) {
    return a.t != b.t ? a.t < b.t : index(a.leg) < index(b.leg);
  });
  return out;
}

Eigen::MatrixXd normalize_abs(const Eigen::MatrixXd& x, NormalizationScale& scale, bool fit,
                              std::vector<std::string>* warnings) {
  const auto cols = static_cast<std::size_t>(x.cols());
  if (fit) {
    scale.max_abs.assign(cols, 1.0);
    for (std::size_t c = 0; c < cols; ++c) {
      const double m = x.rows() > 0 ? x.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff() : 0.0;
      if (m > 0.0) {
        scale.max_abs[c] = m;
      } else if (warnings) {
        warnings->push_back("feature " + std::to_string(c) + " is identically zero; scale set to 1");
      }
    }
  } else if (scale.max_abs.size() != cols) {
    fail(ErrorKind::kSchema, "normalization scale has " + std::to_string(scale.max_abs.size()) +
                                 " entries for " + std::to_string(cols) + " features");
  }
  Eigen::MatrixXd out = x.cwiseAbs();
  for (std::size_t c = 0; c < cols; ++c) out.col(static_cast<Eigen::Index>(c)) /= scale.max_abs[c];
  return out;
}

FeatureMatrix build_feature_matrix(const Stream& stream, FeatureSet features,
                                   const NormalizationScale* scale,
                                   std::vector<std::string>* warnings) {
  const auto channels = feature_channels(features);
  FeatureMatrix m;
  m.features = features;
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(stream.size()), static_cast<Eigen::Index>(channels.size()));
  m.labels.reserve(stream.size());
  m.t.reserve(stream.size());
  m.legs.reserve(stream.size());
  m.substates.reserve(stream.size());
  m.fz.reserve(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const Sample& s = stream[i];
    for (std::size_t j = 0; j < channels.size(); ++j) {
      raw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s.x[channels[j]];
    }
    m.labels.push_back(s.label);
    m.t.push_back(s.t);
    m.legs.push_back(s.leg);
    m.substates.push_back(s.substate);
    m.fz.push_back(s.x[kChannelFz]);
  }
  if (scale) m.scale = *scale;
  m.x = normalize_abs(raw, m.scale, scale == nullptr, warnings);
  return m;
}

PreprocessResult preprocess(const Stream& raw, const PreprocessConfig& cfg,
                            const NormalizationScale* scale,
                            std::span<const GroundTruthFrame> reference) {
  if (!(cfg.rate > 0.0) || !(cfg.standstill_seconds > 0.0)) {
    fail(ErrorKind::kInput, "preprocess needs a positive rate and standstill window");
  }
  PreprocessResult r;
  const auto window = static_cast<std::size_t>(std::llround(cfg.standstill_seconds * cfg.rate));
  const Stream s = remove_bias_and_gravity(raw, window, reference);
  auto o = reject_outliers(s, channel_statistics(s), feature_channels(cfg.features));
  r.outliers = o.rejected;
  Stream inliers = resample_100hz(o.kept, cfg.rate);
  r.stream = cfg.reject_outliers ? std::move(inliers) : resample_100hz(s, cfg.rate);
  NormalizationScale fitted;
  if (!scale) {
    fitted = cfg.reject_outliers ? NormalizationScale{}
                                 : build_feature_matrix(inliers, cfg.features, nullptr, &r.warnings).scale;
    if (!fitted.max_abs.empty()) scale = &fitted;
  }
  r.matrix = build_feature_matrix(r.stream, cfg.features, scale, &r.warnings);
  return r;
}

}  // namespace lcd
