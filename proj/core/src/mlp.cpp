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

#include "lcd/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "lcd/dataset_io.hpp"
#include "lcd/error.hpp"

namespace lcd {

namespace {

constexpr int kModelVersion = 1;
constexpr Eigen::Index kInferChunk = 4096;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

bool is_dropout_layer(const NetworkConfig& cfg, std::size_t layer) {
  return cfg.dropout_after > 0 && layer + 1 == static_cast<std::size_t>(cfg.dropout_after) &&
         cfg.dropout_rate > 0.0;
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& rows, std::span<const std::size_t> idx) {
  Eigen::MatrixXd out(rows.cols(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = rows.row(static_cast<Eigen::Index>(idx[j])).transpose();
  }
  return out;
}

struct SetScore {
  double loss = 0.0;
  double accuracy = 0.0;
};

SetScore score(const MlpModel& model, const Eigen::MatrixXd& x, std::span<const int> labels,
               std::span<const std::size_t> idx) {
  SetScore s;
  if (idx.empty()) return s;
  for (std::size_t start = 0; start < idx.size(); start += kInferChunk) {
    const auto chunk = idx.subspan(start, std::min<std::size_t>(kInferChunk, idx.size() - start));
    const Eigen::MatrixXd p = forward(model, gather_columns(x, chunk), Mode::kInfer);
    for (std::size_t j = 0; j < chunk.size(); ++j) {
      const double p_sc = p(0, static_cast<Eigen::Index>(j));
      const int y = labels[chunk[j]];
      s.loss += loss_bce(p_sc, y);
      s.accuracy += ((p_sc >= 0.5 ? 1 : 0) == y) ? 1.0 : 0.0;
    }
  }
  s.loss /= static_cast<double>(idx.size());
  s.accuracy /= static_cast<double>(idx.size());
  return s;
}

}  // namespace

void NetworkConfig::validate() const {
  if (input_dim <= 0 || output_dim <= 0) fail(ErrorKind::kShape, "network dims must be positive");
  for (int h : hidden) {
    if (h <= 0) fail(ErrorKind::kShape, "hidden dims must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    fail(ErrorKind::kDomain, "dropout rate must lie in [0, 1)");
  }
  if (dropout_after < 0 || dropout_after > static_cast<int>(hidden.size())) {
    fail(ErrorKind::kShape, "dropout must follow an existing hidden layer");
  }
}

std::vector<int> NetworkConfig::dims() const {
  std::vector<int> d{input_dim};
  d.insert(d.end(), hidden.begin(), hidden.end());
  d.push_back(output_dim);
  return d;
}

void MlpModel::validate() const {
  config.validate();
  const auto d = config.dims();
  if (layers.size() + 1 != d.size()) fail(ErrorKind::kShape, "layer count does not match config");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].w.rows() != d[l + 1] || layers[l].w.cols() != d[l] || layers[l].b.size() != d[l + 1]) {
      fail(ErrorKind::kShape, "layer " + std::to_string(l) + " has inconsistent dims");
    }
    if (!layers[l].w.allFinite() || !layers[l].b.allFinite()) {
      fail(ErrorKind::kNumeric, "non-finite parameters in layer " + std::to_string(l));
    }
  }
  if (scale.max_abs.size() != static_cast<std::size_t>(config.input_dim)) {
    fail(ErrorKind::kShape, "normalization scale length does not match the input dim");
  }
  scale.validate();
}

MlpModel init_model(const NetworkConfig& cfg, FeatureSet features, std::uint64_t seed) {
  cfg.validate();
  MlpModel m;
  m.config = cfg;
  m.features = features;
  m.scale.max_abs.assign(static_cast<std::size_t>(cfg.input_dim), 1.0);
  std::mt19937_64 rng(seed);
  const auto d = cfg.dims();
  for (std::size_t l = 0; l + 1 < d.size(); ++l) {
    const double limit = std::sqrt(6.0 / d[l]);
    std::uniform_real_distribution<double> u(-limit, limit);
    DenseLayer layer;
    layer.w.resize(d[l + 1], d[l]);
    for (Eigen::Index i = 0; i < layer.w.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.w.cols(); ++j) layer.w(i, j) = u(rng);
    }
    layer.b = Eigen::VectorXd::Zero(d[l + 1]);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

Eigen::MatrixXd forward(const MlpModel& model, const Eigen::MatrixXd& x, Mode mode,
                        std::mt19937_64* rng, ForwardCache* cache) {
  if (x.rows() != model.config.input_dim) {
    fail(ErrorKind::kShape, "input has " + std::to_string(x.rows()) + " features, model expects " +
                                std::to_string(model.config.input_dim));
  }
  const std::size_t n_layers = model.layers.size();
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.valid = false;
  c.z.resize(n_layers);
  c.a.resize(n_layers + 1);
  c.a[0] = x;
  c.mask.resize(0, 0);
  for (std::size_t l = 0; l < n_layers; ++l) {
    const DenseLayer& layer = model.layers[l];
    c.z[l].noalias() = layer.w * c.a[l];
    c.z[l].colwise() += layer.b;
    if (l + 1 == n_layers) {
      c.a[l + 1] = c.z[l].unaryExpr([](double v) { return sigmoid(v); });
      break;
    }
    c.a[l + 1] = c.z[l].cwiseMax(0.0);
    if (mode == Mode::kTrain && is_dropout_layer(model.config, l)) {
      if (!rng) fail(ErrorKind::kState, "train-mode forward needs a dropout generator");
      const double keep = 1.0 - model.config.dropout_rate;
      std::bernoulli_distribution draw(keep);
      c.mask.resize(c.a[l + 1].rows(), c.a[l + 1].cols());
      for (Eigen::Index j = 0; j < c.mask.cols(); ++j) {
        for (Eigen::Index i = 0; i < c.mask.rows(); ++i) c.mask(i, j) = draw(*rng) ? 1.0 / keep : 0.0;
      }
      c.a[l + 1].array() *= c.mask.array();
    }
  }
  c.valid = true;
  return c.a[n_layers];
}

double loss_bce(double p_sc, int y_sc) {
  const double p = clamp_prob(p_sc);
  return -(y_sc * std::log(p) + (1 - y_sc) * std::log(1.0 - p));
}

double batch_objective(const Eigen::MatrixXd& probs, std::span<const int> labels) {
  if (probs.cols() != static_cast<Eigen::Index>(labels.size()) || probs.rows() < 2) {
    fail(ErrorKind::kShape, "probability batch does not match labels");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    sum += loss_bce(probs(0, col), labels[j]) + loss_bce(probs(1, col), 1 - labels[j]);
  }
  return sum / static_cast<double>(labels.size());
}

Gradients backward(const MlpModel& model, ForwardCache& cache, std::span<const int> labels) {
  const std::size_t n_layers = model.layers.size();
  if (!cache.valid || cache.a.size() != n_layers + 1 ||
      cache.a[0].cols() != static_cast<Eigen::Index>(labels.size())) {
    fail(ErrorKind::kState, "backward needs the activation cache of a matching forward pass");
  }
  cache.valid = false;
  const double inv_b = 1.0 / static_cast<double>(labels.size());

  // Sigmoid + BCE: d/dz = p - target, zero where the clamp is active.
  const Eigen::MatrixXd& p = cache.a[n_layers];
  Eigen::MatrixXd delta(p.rows(), p.cols());
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    const int y = labels[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const double target = i == 0 ? y : (i == 1 ? 1 - y : 0);
      const double v = p(i, j);
      const bool clamped = v < kProbClamp || v > 1.0 - kProbClamp;
      delta(i, j) = (i < 2 && !clamped) ? (v - target) * inv_b : 0.0;
    }
  }

  Gradients g;
  g.w.resize(n_layers);
  g.b.resize(n_layers);
  for (std::size_t l = n_layers; l-- > 0;) {
    g.w[l].noalias() = delta * cache.a[l].transpose();
    g.b[l] = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd up = model.layers[l].w.transpose() * delta;
    if (is_dropout_layer(model.config, l - 1) && cache.mask.size() > 0) up.array() *= cache.mask.array();
    delta = (cache.z[l - 1].array() > 0.0).select(up, 0.0);
  }
  return g;
}

AdamState AdamState::for_model(const MlpModel& model, const AdamConfig& cfg) {
  AdamState s;
  s.cfg = cfg;
  for (const auto& layer : model.layers) {
    s.m_w.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    s.v_w.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    s.m_b.push_back(Eigen::VectorXd::Zero(layer.b.size()));
    s.v_b.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return s;
}

void adam_step(MlpModel& model, const Gradients& g, AdamState& state) {
  if (g.w.size() != model.layers.size() || state.m_w.size() != model.layers.size()) {
    fail(ErrorKind::kShape, "gradient or optimizer state does not match the model");
  }
  const AdamConfig& c = state.cfg;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(c.beta1, t);
  const double c2 = 1.0 - std::pow(c.beta2, t);
  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = c.beta1 * m + (1.0 - c.beta1) * grad;
    v = c.beta2 * v + (1.0 - c.beta2) * grad.cwiseProduct(grad);
    param.array() -= c.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + c.eps);
  };
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    update(model.layers[l].w, g.w[l], state.m_w[l], state.v_w[l]);
    update(model.layers[l].b, g.b[l], state.m_b[l], state.v_b[l]);
  }
}

void TrainConfig::validate() const {
  if (epochs < 1 || batch_size < 1) fail(ErrorKind::kTraining, "epochs and batch size must be >= 1");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    fail(ErrorKind::kTraining, "validation fraction must lie in [0, 1)");
  }
}

TrainResult train(const Eigen::MatrixXd& x, std::span<const int> labels, const NetworkConfig& net,
                  const TrainConfig& cfg, const NormalizationScale& scale, FeatureSet features) {
  cfg.validate();
  net.validate();
  if (x.rows() != static_cast<Eigen::Index>(labels.size())) {
    fail(ErrorKind::kShape, "feature rows do not match label count");
  }
  if (x.cols() != net.input_dim) fail(ErrorKind::kShape, "feature width does not match the network");
  const bool has_sc = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_uc = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!has_sc || !has_uc) fail(ErrorKind::kTraining, "training data must contain both classes");
  for (int y : labels) {
    if (y != 0 && y != 1) fail(ErrorKind::kTraining, "training labels must be 0 or 1");
  }

  std::mt19937_64 rng(cfg.seed);
  TrainResult r;
  r.model = init_model(net, features, rng());
  r.model.scale = scale;
  if (scale.max_abs.empty()) r.model.scale.max_abs.assign(static_cast<std::size_t>(net.input_dim), 1.0);
  r.model.validate();

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  const auto n_val = static_cast<std::size_t>(cfg.validation_fraction * static_cast<double>(order.size()));
  if (n_val > 0) std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> tr(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(val.begin(), val.end());
  std::sort(tr.begin(), tr.end());

  AdamState adam = AdamState::for_model(r.model, cfg.adam);
  ForwardCache cache;
  std::vector<int> batch_labels;
  const auto bs = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(tr.begin(), tr.end(), rng);
    for (std::size_t start = 0; start < tr.size(); start += bs) {
      const auto idx = std::span<const std::size_t>(tr).subspan(start, std::min(bs, tr.size() - start));
      batch_labels.clear();
      for (std::size_t i : idx) batch_labels.push_back(labels[i]);
      forward(r.model, gather_columns(x, idx), Mode::kTrain, &rng, &cache);
      adam_step(r.model, backward(r.model, cache, batch_labels), adam);
    }
    if (!r.model.layers.back().w.allFinite()) fail(ErrorKind::kNumeric, "training diverged");
    std::vector<std::size_t> tr_sorted = tr;
    std::sort(tr_sorted.begin(), tr_sorted.end());
    const SetScore s_tr = score(r.model, x, labels, tr_sorted);
    const SetScore s_val = score(r.model, x, labels, val);
    r.history.push_back({epoch, s_tr.loss, s_tr.accuracy, s_val.loss, s_val.accuracy});
  }
  return r;
}

ContactProbability predict_proba(const MlpModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.config.input_dim)) {
    fail(ErrorKind::kSchema, "sample width does not match the model");
  }
  const Eigen::MatrixXd col = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  const double p = forward(model, col, Mode::kInfer)(0, 0);
  return {p, 1.0 - p};
}

int predict(const MlpModel& model, std::span<const double> x, double cutoff) {
  return predict_proba(model, x).p_sc >= cutoff ? 1 : 0;
}

std::vector<double> predict_proba_rows(const MlpModel& model, const Eigen::MatrixXd& rows) {
  if (rows.cols() != model.config.input_dim) {
    fail(ErrorKind::kSchema, "feature width does not match the model");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index start = 0; start < rows.rows(); start += kInferChunk) {
    const Eigen::Index n = std::min(kInferChunk, rows.rows() - start);
    const Eigen::MatrixXd p = forward(model, rows.middleRows(start, n).transpose(), Mode::kInfer);
    for (Eigen::Index j = 0; j < n; ++j) out.push_back(p(0, j));
  }
  return out;
}

std::vector<double> predict_proba(const MlpModel& model, const FeatureMatrix& m) {
  if (m.features != model.features) {
    fail(ErrorKind::kSchema, "model expects " + std::string(to_string(model.features)) +
                                 " features, data has " + std::string(to_string(m.features)));
  }
  return predict_proba_rows(model, m.x);
}

std::string model_to_json(const MlpModel& model) {
  model.validate();
  using nlohmann::json;
  json j;
  j["version"] = kModelVersion;
  j["feature_set"] = std::string(to_string(model.features));
  j["dims"] = model.config.dims();
  json acts = json::array();
  for (std::size_t i = 0; i < model.config.hidden.size(); ++i) acts.push_back("relu");
  acts.push_back("sigmoid");
  j["activations"] = acts;
  j["dropout"] = {{"after_layer", model.config.dropout_after}, {"rate", model.config.dropout_rate}};
  j["scale"] = model.scale.max_abs;
  json layers = json::array();
  for (const auto& layer : model.layers) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.w.size()));
    for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.w.cols(); ++c) w.push_back(layer.w(r, c));
    }
    layers.push_back({{"w", w}, {"b", std::vector<double>(layer.b.data(), layer.b.data() + layer.b.size())}});
  }
  j["layers"] = layers;
  return j.dump() + "\n";
}

MlpModel model_from_json(const std::string& text) {
  using nlohmann::json;
  MlpModel m;
  try {
    const json j = json::parse(text);
    if (j.at("version").get<int>() != kModelVersion) {
      fail(ErrorKind::kFormat, "unsupported model version " + j.at("version").dump());
    }
    m.features = parse_feature_set(j.at("feature_set").get<std::string>());
    const auto dims = j.at("dims").get<std::vector<int>>();
    if (dims.size() < 2) fail(ErrorKind::kFormat, "model needs at least two dims");
    m.config.input_dim = dims.front();
    m.config.output_dim = dims.back();
    m.config.hidden.assign(dims.begin() + 1, dims.end() - 1);
    m.config.dropout_after = j.at("dropout").at("after_layer").get<int>();
    m.config.dropout_rate = j.at("dropout").at("rate").get<double>();
    const auto acts = j.at("activations").get<std::vector<std::string>>();
    if (acts.size() + 1 != dims.size()) fail(ErrorKind::kFormat, "activation list does not match dims");
    for (std::size_t i = 0; i < acts.size(); ++i) {
      const char* want = i + 1 == acts.size() ? "sigmoid" : "relu";
      if (acts[i] != want) fail(ErrorKind::kFormat, "unsupported activation '" + acts[i] + "'");
    }
    m.scale.max_abs = j.at("scale").get<std::vector<double>>();
    const json& layers = j.at("layers");
    if (layers.size() + 1 != dims.size()) fail(ErrorKind::kFormat, "layer list does not match dims");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const auto w = layers[l].at("w").get<std::vector<double>>();
      const auto b = layers[l].at("b").get<std::vector<double>>();
      const int out = dims[l + 1], in = dims[l];
      if (w.size() != static_cast<std::size_t>(out) * static_cast<std::size_t>(in) ||
          b.size() != static_cast<std::size_t>(out)) {
        fail(ErrorKind::kFormat, "layer " + std::to_string(l) + " has the wrong number of values");
      }
      DenseLayer layer;
      layer.w = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          w.data(), out, in);
      layer.b = Eigen::Map<const Eigen::VectorXd>(b.data(), out);
      m.layers.push_back(std::move(layer));
    }
    m.validate();
  } catch (const json::exception& e) {
    fail(ErrorKind::kFormat, std::string("malformed model file: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kFormat) throw;
    fail(ErrorKind::kFormat, std::string("invalid model file: ") + e.what());
  }
  return m;
}

void save_model(const MlpModel& model, const std::string& path) { write_text_file(path, model_to_json(model)); }

MlpModel load_model(const std::string& path) { return model_from_json(read_text_file(path)); }

}  // namespace lcd
