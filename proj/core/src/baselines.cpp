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

#include "lcd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lcd/error.hpp"

namespace lcd {

namespace {

struct Counts {
  long long sc = 0, sc_hit = 0, uc = 0, uc_hit = 0;

  void add(int pred, int label) {
    if (label == 1) {
      ++sc;
      sc_hit += pred == 1;
    } else {
      ++uc;
      uc_hit += pred == 0;
    }
  }
  double balanced() const {
    if (sc == 0 || uc == 0) return 0.0;
    return 0.5 * (static_cast<double>(sc_hit) / static_cast<double>(sc) +
                  static_cast<double>(uc_hit) / static_cast<double>(uc));
  }
};

// Distinct candidate levels spread over the empirical quantiles of fz.
std::vector<double> candidate_levels(std::span<const std::vector<double>> fz, int grid) {
  std::vector<double> all;
  for (const auto& s : fz) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  if (all.empty()) return out;
  for (int i = 0; i < grid; ++i) {
    const auto k = static_cast<std::size_t>(static_cast<double>(i) / (grid - 1) * static_cast<double>(all.size() - 1));
    if (all[k] > 0.0 && (out.empty() || all[k] > out.back())) out.push_back(all[k]);
  }
  if (out.empty()) out.push_back(1.0);
  return out;
}

void check_streams(std::span<const std::vector<double>> fz, std::span<const std::vector<int>> labels) {
  if (fz.size() != labels.size()) fail(ErrorKind::kShape, "force and label stream counts differ");
  for (std::size_t i = 0; i < fz.size(); ++i) {
    if (fz[i].size() != labels[i].size()) fail(ErrorKind::kShape, "force and label lengths differ");
  }
}

double squared_distance(const Eigen::MatrixXd& batch, Eigen::Index i, const Eigen::MatrixXd& centers,
                        Eigen::Index k) {
  return (batch.row(i) - centers.row(k)).squaredNorm();
}

}  // namespace

void ThresholdConfig::validate() const {
  if (!(f_thresh > 0.0)) fail(ErrorKind::kDomain, "threshold must be positive");
}

void SchmittConfig::validate() const {
  if (!(f_low > 0.0 && f_low < f_high)) fail(ErrorKind::kDomain, "Schmitt thresholds need 0 < low < high");
  if (initial != 0 && initial != 1) fail(ErrorKind::kDomain, "Schmitt initial state must be 0 or 1");
}

std::vector<int> threshold_detect(std::span<const double> fz, const ThresholdConfig& cfg) {
  std::vector<int> out(fz.size());
  for (std::size_t i = 0; i < fz.size(); ++i) out[i] = fz[i] >= cfg.f_thresh ? 1 : 0;
  return out;
}

std::vector<int> schmitt_detect(std::span<const double> fz, const SchmittConfig& cfg) {
  std::vector<int> out(fz.size());
  int state = cfg.initial;
  for (std::size_t i = 0; i < fz.size(); ++i) {
    if (fz[i] > cfg.f_high) state = 1;
    else if (fz[i] < cfg.f_low) state = 0;
    out[i] = state;
  }
  return out;
}

double balanced_accuracy(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) fail(ErrorKind::kShape, "prediction and label lengths differ");
  Counts c;
  for (std::size_t i = 0; i < preds.size(); ++i) c.add(preds[i], labels[i]);
  return c.balanced();
}

ThresholdConfig tune_threshold(std::span<const std::vector<double>> fz,
                               std::span<const std::vector<int>> labels, int grid) {
  check_streams(fz, labels);
  ThresholdConfig best{1.0};
  double best_score = -1.0;
  for (double level : candidate_levels(fz, grid)) {
    Counts c;
    for (std::size_t s = 0; s < fz.size(); ++s) {
      for (std::size_t i = 0; i < fz[s].size(); ++i) c.add(fz[s][i] >= level ? 1 : 0, labels[s][i]);
    }
    if (c.balanced() > best_score) {
      best_score = c.balanced();
      best.f_thresh = level;
    }
  }
  return best;
}

SchmittConfig tune_schmitt(std::span<const std::vector<double>> fz,
                           std::span<const std::vector<int>> labels, int grid) {
  check_streams(fz, labels);
  const auto levels = candidate_levels(fz, grid);
  SchmittConfig best;
  best.f_low = levels.front();
  best.f_high = levels.front() * 2.0;
  double best_score = -1.0;
  for (std::size_t lo = 0; lo < levels.size(); ++lo) {
    for (std::size_t hi = lo + 1; hi < levels.size(); ++hi) {
      const SchmittConfig cfg{levels[lo], levels[hi], 0};
      Counts c;
      for (std::size_t s = 0; s < fz.size(); ++s) {
        int state = cfg.initial;
        for (std::size_t i = 0; i < fz[s].size(); ++i) {
          if (fz[s][i] > cfg.f_high) state = 1;
          else if (fz[s][i] < cfg.f_low) state = 0;
          c.add(state, labels[s][i]);
        }
      }
      if (c.balanced() > best_score) {
        best_score = c.balanced();
        best = cfg;
      }
    }
  }
  return best;
}

void FcmConfig::validate() const {
  if (!(m > 1.0)) fail(ErrorKind::kDomain, "FCM fuzziness must exceed 1");
  if (n_clusters < 2) fail(ErrorKind::kDomain, "FCM needs at least two clusters");
  if (batch_size < n_clusters) fail(ErrorKind::kDomain, "FCM batch must hold at least one row per cluster");
  if (max_iter < 1 || !(tol > 0.0)) fail(ErrorKind::kDomain, "FCM iteration limits must be positive");
}

Eigen::VectorXd fcm_memberships(const Eigen::MatrixXd& centers, const Eigen::VectorXd& x, double m) {
  const Eigen::Index c = centers.rows();
  Eigen::VectorXd d2(c);
  for (Eigen::Index k = 0; k < c; ++k) d2(k) = (x.transpose() - centers.row(k)).squaredNorm();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(c);
  for (Eigen::Index k = 0; k < c; ++k) {
    if (d2(k) == 0.0) {
      u(k) = 1.0;
      return u;
    }
  }
  // u_k = 1 / sum_j (d_k / d_j)^(2 / (m - 1)), with squared distances.
  const double p = 1.0 / (m - 1.0);
  for (Eigen::Index k = 0; k < c; ++k) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < c; ++j) s += std::pow(d2(k) / d2(j), p);
    u(k) = 1.0 / s;
  }
  return u;
}

double fcm_objective(const Eigen::MatrixXd& batch, const Eigen::MatrixXd& u, const Eigen::MatrixXd& centers,
                     double m) {
  double j = 0.0;
  for (Eigen::Index i = 0; i < batch.rows(); ++i) {
    for (Eigen::Index k = 0; k < centers.rows(); ++k) {
      j += std::pow(u(i, k), m) * squared_distance(batch, i, centers, k);
    }
  }
  return j;
}

FcmFit fcm_fit(const Eigen::MatrixXd& batch, const FcmConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const Eigen::Index n = batch.rows(), c = cfg.n_clusters;
  if (n < c) fail(ErrorKind::kInput, "FCM batch has fewer rows than clusters");
  if (cfg.fz_feature < 0 || cfg.fz_feature >= batch.cols()) {
    fail(ErrorKind::kShape, "FCM vertical-force column is out of range");
  }
  bool degenerate = true;
  for (Eigen::Index i = 1; i < n && degenerate; ++i) degenerate = batch.row(i) == batch.row(0);
  if (degenerate) fail(ErrorKind::kConvergence, "FCM batch rows are all identical");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  FcmFit fit;
  Eigen::MatrixXd u(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < c; ++k) u(i, k) = uni(rng) + 1e-3;
    u.row(i) /= u.row(i).sum();
  }
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(c, batch.cols());
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Eigen::MatrixXd um = u.array().pow(cfg.m);
    Eigen::MatrixXd next(c, batch.cols());
    for (Eigen::Index k = 0; k < c; ++k) {
      next.row(k) = (um.col(k).transpose() * batch) / um.col(k).sum();
    }
    const double shift = it == 1 ? INFINITY : (next - centers).cwiseAbs().maxCoeff();
    centers = next;
    fit.objective.push_back(fcm_objective(batch, u, centers, cfg.m));
    for (Eigen::Index i = 0; i < n; ++i) {
      u.row(i) = fcm_memberships(centers, batch.row(i).transpose(), cfg.m).transpose();
    }
    fit.iterations = it;
    if (shift < cfg.tol) break;
  }
  fit.model.centers = centers;
  fit.model.m = cfg.m;
  Eigen::Index sc = 0;
  centers.col(cfg.fz_feature).maxCoeff(&sc);
  fit.model.sc_cluster = static_cast<int>(sc);
  fit.memberships = u;
  return fit;
}

double fcm_predict(const FcmModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.centers.cols()) fail(ErrorKind::kShape, "FCM input width mismatch");
  return fcm_memberships(model.centers, x, model.m)(model.sc_cluster);
}

std::vector<double> fcm_online(const Eigen::MatrixXd& rows, const FcmConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::vector<double> out(static_cast<std::size_t>(rows.rows()), 0.5);
  std::mt19937_64 rng(seed);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const Eigen::Index start = std::max<Eigen::Index>(0, i + 1 - cfg.batch_size);
    const Eigen::Index len = i + 1 - start;
    if (len < cfg.n_clusters) continue;
    try {
      const FcmFit fit = fcm_fit(rows.middleRows(start, len), cfg, rng());
      out[static_cast<std::size_t>(i)] = fcm_predict(fit.model, rows.row(i).transpose());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kConvergence) throw;
      // A constant window carries no cluster structure; keep the last estimate.
      if (i > 0) out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i - 1)];
    }
  }
  return out;
}

}  // namespace lcd
