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

#ifndef LCD_PIPELINE_HPP_
#define LCD_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcd/baselines.hpp"
#include "lcd/eval.hpp"
#include "lcd/gait_sim.hpp"
#include "lcd/labeler.hpp"
#include "lcd/mlp.hpp"
#include "lcd/preprocess.hpp"
#include "lcd/sensor_model.hpp"

namespace lcd {

struct TerrainSpec {
  enum class Kind { kUniform, kMixed, kScenario, kPatches };
  Kind kind = Kind::kUniform;
  double mu = 0.2;
  double mu_min = 0.05;
  double mu_max = 1.2;
  int levels = 8;
  double patch_length = 2.0;
  std::vector<FrictionParams> patches;  // kPatches only

  Terrain build(const RobotParams& robot, int n_steps, std::uint64_t seed) const;
};

// Everything a command needs besides file paths. JSON keys mirror the fields;
// see README for the schema.
struct PipelineConfig {
  std::string preset = "atlas-like";
  TerrainSpec terrain;
  double minutes = 10.0;
  int steps = 0;  // overrides minutes when positive
  std::uint64_t seed = 7;
  SensorNoiseParams noise;
  LabelThresholds thresholds;
  FeatureSet features = FeatureSet::kFull;
  TrainConfig train;
  double standstill_seconds = 2.0;
  std::optional<bool> reject_outliers;  // default: on for train, off otherwise
  Normalization normalization = Normalization::kModel;
  double cutoff = 0.5;
  FcmConfig fcm;

  // Throws ErrorKind::kUsage on any inconsistency.
  void validate() const;
  std::string to_json() const;
  std::string hash() const;
  // Applies the keys present in `text` on top of `base`; unknown keys and bad
  // values are usage errors, text that is not JSON is a format error.
  static PipelineConfig from_json(std::string_view text);
  static PipelineConfig from_json(std::string_view text, const PipelineConfig& base);
};

// Sample rate of a stream from its timestamps (100 or 500 Hz).
double infer_rate(const Stream& stream);

struct GenerateResult {
  std::string truth_path;
  std::string dataset_path;
  std::string manifest_path;
  std::string dataset_hash;
  std::size_t rows = 0;
};

// gait-sim -> sensor-model -> labeler. Writes <name>.truth.csv (noise-free
// foot-frame ground truth), <name>.csv (labeled measurements) and
// <name>.manifest.json into out_dir.
GenerateResult cmd_generate(const PipelineConfig& cfg, const std::string& out_dir,
                            const std::string& name = "dataset");

// Preprocess a labeled dataset file for training or scoring.
PreprocessResult load_and_preprocess(const PipelineConfig& cfg, const std::string& data_path,
                                     FeatureSet features, bool reject_outliers,
                                     const NormalizationScale* scale);

// Trains on a labeled dataset; writes the model, a history CSV and
// <model>.manifest.json.
TrainResult cmd_train(const PipelineConfig& cfg, const std::string& data_path,
                      const std::string& model_path, const std::string& history_path);

// Writes `t,leg,p_sc,class` for every 100 Hz leg-sample. Returns warnings.
std::vector<std::string> cmd_predict(const PipelineConfig& cfg, const std::string& model_path,
                                     const std::string& data_path, const std::string& out_path);

struct EvaluateOptions {
  bool trace = false;
  bool csv = true;
  bool json = true;
};

// One report per dataset (<stem>.report.csv/json) plus combined.csv; with
// trace, <stem>.<method>.trace.csv per method.
std::vector<EvalReport> cmd_evaluate(const PipelineConfig& cfg, const std::string& model_path,
                                     const std::vector<std::string>& data_paths,
                                     const std::string& out_dir, const EvaluateOptions& opt = {});

// Every detector on one dataset; writes <method>.predictions.csv into out_dir
// (when non-empty) and returns the report. LCD is skipped without a model.
EvalReport cmd_compare(const PipelineConfig& cfg, const std::string& data_path,
                       const std::string& model_path, const std::string& out_dir);

std::string format_report_table(const std::vector<EvalReport>& reports);

}  // namespace lcd

#endif  // LCD_PIPELINE_HPP_
