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

#ifndef LCD_MLP_HPP_
#define LCD_MLP_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lcd/preprocess.hpp"

namespace lcd {

inline constexpr double kProbClamp = 1e-7;

struct NetworkConfig {
  int input_dim = 12;
  std::vector<int> hidden = {128, 128, 64, 128};
  int dropout_after = 2;  // hidden layer (1-based) followed by dropout; 0 for none
  double dropout_rate = 0.3;
  int output_dim = 2;

  void validate() const;
  // input, hidden..., output
  std::vector<int> dims() const;
  bool operator==(const NetworkConfig&) const = default;
};

struct DenseLayer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;
};

struct MlpModel {
  NetworkConfig config;
  std::vector<DenseLayer> layers;
  NormalizationScale scale;
  FeatureSet features = FeatureSet::kFull;

  void validate() const;
};

// He-uniform weights, zero biases. Scale defaults to ones.
MlpModel init_model(const NetworkConfig& cfg, FeatureSet features, std::uint64_t seed);

enum class Mode { kTrain, kInfer };

// Activations kept for backward. z[l] is the pre-activation of layer l,
// a[0] the input and a[l + 1] the (post-dropout) output of layer l.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> z;
  std::vector<Eigen::MatrixXd> a;
  Eigen::MatrixXd mask;  // inverted-dropout multipliers, empty when unused
  bool valid = false;
};

// x holds one sample per column. Returns output probabilities (output_dim x
// batch). Train mode draws a dropout mask from `rng`.
Eigen::MatrixXd forward(const MlpModel& model, const Eigen::MatrixXd& x, Mode mode,
                        std::mt19937_64* rng = nullptr, ForwardCache* cache = nullptr);

// Binary cross-entropy with the probability clamped to [1e-7, 1 - 1e-7].
double loss_bce(double p_sc, int y_sc);

// Mean over the batch of BCE(unit 0, y) + BCE(unit 1, 1 - y).
double batch_objective(const Eigen::MatrixXd& probs, std::span<const int> labels);

struct Gradients {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
};

// Gradient of batch_objective. Consumes the cache, which must come from a
// forward pass over the same batch; throws ErrorKind::kState otherwise.
Gradients backward(const MlpModel& model, ForwardCache& cache, std::span<const int> labels);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig cfg;
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
  long long step = 0;

  static AdamState for_model(const MlpModel& model, const AdamConfig& cfg = {});
};

void adam_step(MlpModel& model, const Gradients& g, AdamState& state);

struct TrainConfig {
  int epochs = 30;
  int batch_size = 16;
  std::uint64_t seed = 1;
  double validation_fraction = 0.0;
  bool shuffle = true;
  AdamConfig adam;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;      // mean BCE on p_sc over the training rows, inference mode
  double accuracy = 0.0;  // fraction at cutoff 0.5
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  MlpModel model;
  std::vector<EpochStats> history;
};

// Rows of x are samples already normalized with `scale`.
TrainResult train(const Eigen::MatrixXd& x, std::span<const int> labels, const NetworkConfig& net,
                  const TrainConfig& cfg, const NormalizationScale& scale, FeatureSet features);

struct ContactProbability {
  double p_sc = 0.5;
  double p_uc = 0.5;
};

ContactProbability predict_proba(const MlpModel& model, std::span<const double> x);
int predict(const MlpModel& model, std::span<const double> x, double cutoff = 0.5);

// p_sc for every row. Throws ErrorKind::kSchema when the feature set or width
// does not match the model.
std::vector<double> predict_proba(const MlpModel& model, const FeatureMatrix& m);
std::vector<double> predict_proba_rows(const MlpModel& model, const Eigen::MatrixXd& rows);

std::string model_to_json(const MlpModel& model);
MlpModel model_from_json(const std::string& text);
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

}  // namespace lcd

#endif  // LCD_MLP_HPP_
