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

#include "lcd/eval.hpp"

#include <array>
#include <cstdio>

#include "json.hpp"
#include "lcd/error.hpp"

namespace lcd {

namespace {

std::string describe(const ThresholdConfig& c) { return "f_thresh=" + format_number(c.f_thresh); }

std::string describe(const SchmittConfig& c) {
  return "f_low=" + format_number(c.f_low) + ";f_high=" + format_number(c.f_high);
}

MethodResult score_method(std::string name, std::vector<double> p_sc, std::vector<int> preds,
                          std::span<const int> labels, std::string params) {
  MethodResult r;
  r.name = std::move(name);
  r.confusion = confusion_matrix(preds, labels);
  r.accuracy = per_class_accuracy(r.confusion);
  r.params = std::move(params);
  r.p_sc = std::move(p_sc);
  r.preds = std::move(preds);
  return r;
}

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) fail(ErrorKind::kEvaluation, "prediction and label lengths differ");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] == 1) {
      (preds[i] == 1 ? cm.tp : cm.fn)++;
    } else {
      (preds[i] == 1 ? cm.fp : cm.tn)++;
    }
  }
  return cm;
}

ClassAccuracy per_class_accuracy(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0 || cm.tn + cm.fp == 0) {
    fail(ErrorKind::kEvaluation, "per-class accuracy needs both SC and UC samples");
  }
  return {100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn),
          100.0 * static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp)};
}

ClassAccuracy per_class_accuracy(std::span<const int> preds, std::span<const int> labels) {
  return per_class_accuracy(confusion_matrix(preds, labels));
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return buf.data();
}

std::string_view to_string(Normalization n) { return n == Normalization::kModel ? "model" : "dataset"; }

Normalization parse_normalization(std::string_view text) {
  if (text == "model") return Normalization::kModel;
  if (text == "dataset") return Normalization::kDataset;
  fail(ErrorKind::kUsage, "unknown normalization '" + std::string(text) + "'");
}

const MethodResult& EvalReport::method(std::string_view name) const {
  for (const auto& m : methods) {
    if (m.name == name) return m;
  }
  fail(ErrorKind::kEvaluation, "report has no method '" + std::string(name) + "'");
}

EvalReport compare_methods(const Stream& stream, const MlpModel* model, const CompareConfig& cfg,
                           const std::string& dataset_id) {
  std::vector<int> labels;
  labels.reserve(stream.size());
  std::array<std::vector<std::size_t>, 2> rows_of;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i].label != 0 && stream[i].label != 1) {
      fail(ErrorKind::kEvaluation, "evaluation needs a fully labeled stream");
    }
    labels.push_back(stream[i].label);
    rows_of[index(stream[i].leg)].push_back(i);
  }
  EvalReport report;
  report.dataset_id = dataset_id;
  const ConfusionMatrix all = confusion_matrix(labels, labels);
  report.n_sc = all.tp;
  report.n_uc = all.tn;
  if (report.n_sc == 0 || report.n_uc == 0) {
    fail(ErrorKind::kEvaluation, "evaluation needs both SC and UC samples");
  }
  report.fingerprints["rows"] = std::to_string(stream.size());
  report.fingerprints["seed"] = std::to_string(cfg.seed);
  report.fingerprints["cutoff"] = format_number(cfg.cutoff);

  std::array<std::vector<double>, 2> fz_leg;
  std::array<std::vector<int>, 2> label_leg;
  for (Leg leg : kLegs) {
    for (std::size_t i : rows_of[index(leg)]) {
      fz_leg[index(leg)].push_back(stream[i].x[kChannelFz]);
      label_leg[index(leg)].push_back(labels[i]);
    }
  }
  // Scatter per-leg outputs back into stream order.
  auto merge = [&](const std::array<std::vector<int>, 2>& per_leg) {
    std::vector<int> out(stream.size());
    for (Leg leg : kLegs) {
      const auto& rows = rows_of[index(leg)];
      for (std::size_t k = 0; k < rows.size(); ++k) out[rows[k]] = per_leg[index(leg)][k];
    }
    return out;
  };
  auto as_prob = [](const std::vector<int>& preds) { return std::vector<double>(preds.begin(), preds.end()); };

  if (cfg.lcd) {
    if (!model) fail(ErrorKind::kUsage, "LCD evaluation needs a model");
    const NormalizationScale* scale = &model->scale;
    if (cfg.normalization == Normalization::kDataset) {
      scale = cfg.dataset_scale.max_abs.empty() ? nullptr : &cfg.dataset_scale;
    }
    const FeatureMatrix m = build_feature_matrix(stream, model->features, scale);
    std::vector<double> p = predict_proba(*model, m);
    std::vector<int> preds(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) preds[i] = p[i] >= cfg.cutoff ? 1 : 0;
    report.fingerprints["model_hash"] = fnv1a_hex(model_to_json(*model));
    report.fingerprints["normalization"] = std::string(to_string(cfg.normalization));
    report.methods.push_back(score_method("LCD", std::move(p), std::move(preds), labels,
                                          "features=" + std::string(to_string(model->features))));
  }
  if (cfg.threshold) {
    const ThresholdConfig t = tune_threshold(fz_leg, label_leg);
    std::vector<double> fz(stream.size());
    for (std::size_t i = 0; i < stream.size(); ++i) fz[i] = stream[i].x[kChannelFz];
    std::vector<int> preds = threshold_detect(fz, t);
    report.methods.push_back(score_method("T", as_prob(preds), preds, labels, describe(t)));
  }
  if (cfg.schmitt) {
    const SchmittConfig st = tune_schmitt(fz_leg, label_leg);
    std::array<std::vector<int>, 2> per_leg;
    for (Leg leg : kLegs) per_leg[index(leg)] = schmitt_detect(fz_leg[index(leg)], st);
    std::vector<int> preds = merge(per_leg);
    report.methods.push_back(score_method("ST", as_prob(preds), preds, labels, describe(st)));
  }
  if (cfg.fcm) {
    const FeatureMatrix m = build_feature_matrix(stream, FeatureSet::kFull);
    std::vector<double> p(stream.size());
    for (Leg leg : kLegs) {
      const auto& rows = rows_of[index(leg)];
      Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), m.x.cols());
      for (std::size_t k = 0; k < rows.size(); ++k) {
        x.row(static_cast<Eigen::Index>(k)) = m.x.row(static_cast<Eigen::Index>(rows[k]));
      }
      const auto pl = fcm_online(x, cfg.fcm_config, cfg.seed + index(leg));
      for (std::size_t k = 0; k < rows.size(); ++k) p[rows[k]] = pl[k];
    }
    std::vector<int> preds(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) preds[i] = p[i] >= 0.5 ? 1 : 0;
    report.methods.push_back(score_method("FCM", std::move(p), std::move(preds), labels,
                                          "m=" + format_number(cfg.fcm_config.m) +
                                              ";batch=" + std::to_string(cfg.fcm_config.batch_size)));
  }
  return report;
}

std::string report_csv(const EvalReport& report) {
  CsvTable t;
  t.header = {"dataset", "method", "sc_pct", "uc_pct", "tp", "fp", "tn", "fn", "n_sc", "n_uc", "params"};
  for (const auto& m : report.methods) {
    t.rows.push_back({report.dataset_id, m.name, format_number(m.accuracy.sc), format_number(m.accuracy.uc),
                      std::to_string(m.confusion.tp), std::to_string(m.confusion.fp),
                      std::to_string(m.confusion.tn), std::to_string(m.confusion.fn),
                      std::to_string(report.n_sc), std::to_string(report.n_uc), m.params});
  }
  return to_csv(t);
}

EvalReport parse_report_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  EvalReport r;
  if (t.header.empty()) return r;
  const auto col = [&](std::string_view name) { return t.column(name); };
  const std::size_t cd = col("dataset"), cm = col("method"), csc = col("sc_pct"), cuc = col("uc_pct"),
                    ctp = col("tp"), cfp = col("fp"), ctn = col("tn"), cfn = col("fn"), cnsc = col("n_sc"),
                    cnuc = col("n_uc"), cp = col("params");
  auto count = [](const std::string& s) { return static_cast<long long>(parse_double(s)); };
  for (const auto& row : t.rows) {
    r.dataset_id = row[cd];
    r.n_sc = count(row[cnsc]);
    r.n_uc = count(row[cnuc]);
    MethodResult m;
    m.name = row[cm];
    m.accuracy = {parse_double(row[csc]), parse_double(row[cuc])};
    m.confusion = {count(row[ctp]), count(row[cfp]), count(row[ctn]), count(row[cfn])};
    m.params = row[cp];
    r.methods.push_back(std::move(m));
  }
  return r;
}

std::string report_json(const EvalReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["dataset"] = report.dataset_id;
  j["fingerprints"] = report.fingerprints;
  j["n_sc"] = report.n_sc;
  j["n_uc"] = report.n_uc;
  ordered_json methods = ordered_json::array();
  for (const auto& m : report.methods) {
    methods.push_back({{"name", m.name},
                       {"sc_pct", m.accuracy.sc},
                       {"uc_pct", m.accuracy.uc},
                       {"confusion", {{"tp", m.confusion.tp}, {"fp", m.confusion.fp},
                                      {"tn", m.confusion.tn}, {"fn", m.confusion.fn}}},
                       {"params", m.params}});
  }
  j["methods"] = methods;
  return j.dump(2) + "\n";
}

void export_report(const EvalReport& report, const std::string& path, std::string_view format) {
  if (format == "csv") {
    write_text_file(path, report_csv(report));
  } else if (format == "json") {
    write_text_file(path, report_json(report));
  } else {
    fail(ErrorKind::kUsage, "unknown report format '" + std::string(format) + "'");
  }
}

}  // namespace lcd
