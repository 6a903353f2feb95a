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

#ifndef LCD_BASELINES_HPP_
#define LCD_BASELINES_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace lcd {

// Classes throughout: 1 SC, 0 UC.

struct ThresholdConfig {
  double f_thresh = 1.0;  // N

  void validate() const;
};

struct SchmittConfig {
  double f_low = 1.0;   // N
  double f_high = 2.0;  // N
  int initial = 0;

  void validate() const;
};

// SC iff fz >= f_thresh.
std::vector<int> threshold_detect(std::span<const double> fz, const ThresholdConfig& cfg);

// Rises to SC above f_high, falls to UC below f_low, holds otherwise.
std::vector<int> schmitt_detect(std::span<const double> fz, const SchmittConfig& cfg);

// Mean of the per-class recalls; 0 when a class is absent.
double balanced_accuracy(std::span<const int> preds, std::span<const int> labels);

// Grid searches maximizing balanced accuracy on the given stream. Streams are
// per-leg sequences; each is run independently.
ThresholdConfig tune_threshold(std::span<const std::vector<double>> fz,
                               std::span<const std::vector<int>> labels, int grid = 128);
SchmittConfig tune_schmitt(std::span<const std::vector<double>> fz,
                           std::span<const std::vector<int>> labels, int grid = 64);

struct FcmConfig {
  double m = 1.2;
  int n_clusters = 2;
  int batch_size = 20;
  int max_iter = 100;
  double tol = 1e-6;
  int fz_feature = 2;  // column holding the vertical force

  void validate() const;
};

struct FcmModel {
  Eigen::MatrixXd centers;  // n_clusters x dim
  int sc_cluster = 0;
  double m = 1.2;
};

struct FcmFit {
  FcmModel model;
  Eigen::MatrixXd memberships;    // rows x n_clusters
  std::vector<double> objective;  // one value per iteration
  int iterations = 0;
};

// Memberships of one point; rows sum to 1. A point on a center belongs to it
// entirely.
Eigen::VectorXd fcm_memberships(const Eigen::MatrixXd& centers, const Eigen::VectorXd& x, double m);
// Sum_ik u_ik^m |x_i - v_k|^2.
double fcm_objective(const Eigen::MatrixXd& batch, const Eigen::MatrixXd& u,
                     const Eigen::MatrixXd& centers, double m);

// Alternating optimization from seeded random memberships. Throws
// ErrorKind::kConvergence when all rows coincide.
FcmFit fcm_fit(const Eigen::MatrixXd& batch, const FcmConfig& cfg, std::uint64_t seed);

// Membership of x in the SC cluster.
double fcm_predict(const FcmModel& model, const Eigen::VectorXd& x);

// Online protocol over one leg's rows: fit on the trailing batch_size rows and
// score the newest. Rows before a full window use what is available.
std::vector<double> fcm_online(const Eigen::MatrixXd& rows, const FcmConfig& cfg, std::uint64_t seed);

}  // namespace lcd

#endif  // LCD_BASELINES_HPP_
