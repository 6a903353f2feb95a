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

#ifndef LCD_EVAL_HPP_
#define LCD_EVAL_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcd/baselines.hpp"
#include "lcd/dataset_io.hpp"
#include "lcd/mlp.hpp"
#include "lcd/preprocess.hpp"

namespace lcd {

// SC is the positive class.
struct ConfusionMatrix {
  long long tp = 0, fp = 0, tn = 0, fn = 0;

  long long total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion_matrix(std::span<const int> preds, std::span<const int> labels);

// Percentages of SC and UC samples classified correctly.
struct ClassAccuracy {
  double sc = 0.0;
  double uc = 0.0;
};
// Throws ErrorKind::kEvaluation when a class is absent or lengths differ.
ClassAccuracy per_class_accuracy(std::span<const int> preds, std::span<const int> labels);
ClassAccuracy per_class_accuracy(const ConfusionMatrix& cm);

// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

enum class Normalization {
  kModel,    // reuse the scale frozen in the model file
  kDataset,  // refit the max-abs scale on the evaluated dataset
};
std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view text);

struct MethodResult {
  std::string name;
  ClassAccuracy accuracy;
  ConfusionMatrix confusion;
  std::string params;
  std::vector<double> p_sc;
  std::vector<int> preds;
};

struct EvalReport {
  std::string dataset_id;
  std::map<std::string, std::string> fingerprints;  // dataset hash, model hash, seed, ...
  long long n_sc = 0;
  long long n_uc = 0;
  std::vector<MethodResult> methods;

  const MethodResult& method(std::string_view name) const;
};

struct CompareConfig {
  bool lcd = true;
  bool threshold = true;
  bool schmitt = true;
  bool fcm = true;
  double cutoff = 0.5;
  Normalization normalization = Normalization::kModel;
  // Scale used by kDataset; fitted on the scored stream itself when empty.
  NormalizationScale dataset_scale;
  FcmConfig fcm_config;
  std::uint64_t seed = 1;
};

// Scores every method on the same bias-free 100 Hz labeled stream. T and ST
// use raw fz and are tuned on the stream itself; FCM runs online per leg on
// the normalized 12-channel features.
EvalReport compare_methods(const Stream& stream, const MlpModel* model, const CompareConfig& cfg,
                           const std::string& dataset_id = "dataset");

std::string report_csv(const EvalReport& report);
std::string report_json(const EvalReport& report);
// Rebuilds the scored part of a report (names, accuracies, confusion counts).
EvalReport parse_report_csv(std::string_view text);
void export_report(const EvalReport& report, const std::string& path, std::string_view format);

}  // namespace lcd

#endif  // LCD_EVAL_HPP_
