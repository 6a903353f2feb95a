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

#include "lcd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>

#include "json.hpp"
#include "lcd/dataset_io.hpp"
#include "lcd/error.hpp"

namespace lcd {

namespace {

using nlohmann::ordered_json;

constexpr int kManifestVersion = 1;
constexpr std::uint64_t kNoiseSeedOffset = 1000003;

std::string_view to_string(TerrainSpec::Kind k) {
  switch (k) {
    case TerrainSpec::Kind::kUniform: return "uniform";
    case TerrainSpec::Kind::kMixed: return "mixed";
    case TerrainSpec::Kind::kScenario: return "scenario";
    case TerrainSpec::Kind::kPatches: return "patches";
  }
  return "?";
}

TerrainSpec::Kind parse_terrain_kind(std::string_view s) {
  if (s == "uniform") return TerrainSpec::Kind::kUniform;
  if (s == "mixed") return TerrainSpec::Kind::kMixed;
  if (s == "scenario") return TerrainSpec::Kind::kScenario;
  if (s == "patches") return TerrainSpec::Kind::kPatches;
  fail(ErrorKind::kUsage, "unknown terrain kind '" + std::string(s) + "'");
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::kIo, "cannot create directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& file) {
  return dir.empty() ? file : (std::filesystem::path(dir) / file).string();
}

std::string stem_of(const std::string& path) {
  std::string s = std::filesystem::path(path).filename().string();
  if (s.size() > 4 && s.ends_with(".csv")) s.resize(s.size() - 4);
  return s;
}

// Runs `body` on the keys of a JSON object, rejecting unknown ones.
using Handlers = std::map<std::string, std::function<void(const ordered_json&)>>;
void apply_object(const ordered_json& j, const std::string& where, const Handlers& handlers) {
  if (!j.is_object()) fail(ErrorKind::kUsage, "config '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    const auto it = handlers.find(key);
    if (it == handlers.end()) fail(ErrorKind::kUsage, "unknown config key '" + where + key + "'");
    it->second(value);
  }
}

ordered_json noise_json(const SensorNoiseParams& n) {
  return {{"acc", n.acc},         {"gyro", n.gyro},   {"acc_bias", n.acc_bias},
          {"gyro_bias", n.gyro_bias}, {"force", n.force}, {"torque", n.torque},
          {"force_bias", n.force_bias}, {"torque_bias", n.torque_bias}};
}

ordered_json config_json(const PipelineConfig& c) {
  ordered_json terrain = {{"kind", to_string(c.terrain.kind)}};
  switch (c.terrain.kind) {
    case TerrainSpec::Kind::kUniform: terrain["mu"] = c.terrain.mu; break;
    case TerrainSpec::Kind::kMixed:
      terrain["mu_min"] = c.terrain.mu_min;
      terrain["mu_max"] = c.terrain.mu_max;
      terrain["levels"] = c.terrain.levels;
      terrain["patch_length"] = c.terrain.patch_length;
      break;
    case TerrainSpec::Kind::kScenario: break;
    case TerrainSpec::Kind::kPatches: {
      ordered_json ps = ordered_json::array();
      for (const auto& p : c.terrain.patches) {
        ps.push_back({{"start", p.segment_start}, {"mu_xy", p.mu_xy}, {"mu_z", p.mu_z}});
      }
      terrain["patches"] = ps;
      break;
    }
  }
  ordered_json j;
  j["preset"] = c.preset;
  j["terrain"] = terrain;
  j["minutes"] = c.minutes;
  j["steps"] = c.steps;
  j["seed"] = c.seed;
  j["noise"] = noise_json(c.noise);
  j["thresholds"] = {{"f_min", c.thresholds.f_min}, {"eps_v", c.thresholds.eps_v}, {"eps_w", c.thresholds.eps_w}};
  j["features"] = to_string(c.features);
  j["train"] = {{"epochs", c.train.epochs},
                {"batch_size", c.train.batch_size},
                {"seed", c.train.seed},
                {"validation_fraction", c.train.validation_fraction},
                {"lr", c.train.adam.lr},
                {"beta1", c.train.adam.beta1},
                {"beta2", c.train.adam.beta2},
                {"eps", c.train.adam.eps}};
  j["preprocess"] = {{"standstill_seconds", c.standstill_seconds},
                     {"reject_outliers", c.reject_outliers ? ordered_json(*c.reject_outliers) : ordered_json()}};
  j["evaluate"] = {{"normalization", to_string(c.normalization)},
                   {"cutoff", c.cutoff},
                   {"fcm", {{"m", c.fcm.m}, {"batch_size", c.fcm.batch_size}, {"max_iter", c.fcm.max_iter},
                            {"tol", c.fcm.tol}}}};
  return j;
}

std::string write_manifest(const std::string& path, ordered_json body) {
  body["version"] = kManifestVersion;
  const std::string text = body.dump(2) + "\n";
  write_text_file(path, text);
  return text;
}

bool reject_for(const PipelineConfig& cfg, bool training) { return cfg.reject_outliers.value_or(training); }

std::vector<PredictionRow> rows_for(const Stream& s, std::span<const double> p, std::span<const int> cls) {
  std::vector<PredictionRow> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back({s[i].t, s[i].leg, p[i], cls[i]});
  return out;
}

struct LoadedData {
  std::string hash;
  Stream raw;
};

LoadedData load_dataset(const std::string& path, bool require_labels) {
  const std::string text = read_text_file(path);
  return {fnv1a_hex(text), parse_measured_csv(text, require_labels)};
}

PreprocessResult preprocess_loaded(const PipelineConfig& cfg, const Stream& raw, FeatureSet features,
                                   bool reject, const NormalizationScale* scale) {
  if (raw.empty()) fail(ErrorKind::kInput, "dataset is empty");
  PreprocessConfig pc;
  pc.features = features;
  pc.rate = infer_rate(raw);
  pc.standstill_seconds = cfg.standstill_seconds;
  pc.reject_outliers = reject;
  return preprocess(raw, pc, scale);
}

CompareConfig compare_config(const PipelineConfig& cfg) {
  CompareConfig cc;
  cc.cutoff = cfg.cutoff;
  cc.normalization = cfg.normalization;
  cc.fcm_config = cfg.fcm;
  cc.seed = cfg.seed;
  return cc;
}

}  // namespace

Terrain TerrainSpec::build(const RobotParams& robot, int n_steps, std::uint64_t seed) const {
  switch (kind) {
    case Kind::kUniform: return uniform_terrain(mu);
    case Kind::kMixed: {
      const double length = (n_steps + 4) * robot.step_length * 1.5 + 2.0 * patch_length;
      return mixed_terrain(mu_min, mu_max, length, seed, levels, patch_length);
    }
    case Kind::kScenario: return slip_scenario_terrain(robot.step_length);
    case Kind::kPatches: {
      Terrain t{patches};
      t.validate();
      return t;
    }
  }
  fail(ErrorKind::kUsage, "unknown terrain kind");
}

void PipelineConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::kUsage, "invalid configuration: " + what);
  };
  try {
    robot_preset(preset);
    noise.validate();
    thresholds.validate();
    train.validate();
    fcm.validate();
  } catch (const Error& e) {
    fail(ErrorKind::kUsage, std::string("invalid configuration: ") + e.what());
  }
  require(std::isfinite(minutes) && minutes > 0.0, "minutes must be positive");
  require(steps >= 0 && steps != 1, "steps must be 0 (use minutes) or at least 2");
  require(standstill_seconds > 0.0 && standstill_seconds <= 3.0,
          "standstill_seconds must lie in (0, 3], the simulated standstill");
  require(cutoff >= 0.0 && cutoff <= 1.0, "cutoff must lie in [0, 1]");
  switch (terrain.kind) {
    case TerrainSpec::Kind::kUniform: require(terrain.mu > 0.0, "mu must be positive"); break;
    case TerrainSpec::Kind::kMixed:
      require(terrain.mu_min > 0.0 && terrain.mu_min < terrain.mu_max, "mu sweep needs 0 < min < max");
      require(terrain.levels >= 2, "mixed terrain needs at least 2 levels");
      require(terrain.patch_length > 0.0, "patch_length must be positive");
      break;
    case TerrainSpec::Kind::kScenario: break;
    case TerrainSpec::Kind::kPatches:
      require(!terrain.patches.empty(), "patch terrain needs patches");
      try {
        Terrain{terrain.patches}.validate();
      } catch (const Error& e) {
        fail(ErrorKind::kUsage, std::string("invalid configuration: ") + e.what());
      }
      break;
  }
}

std::string PipelineConfig::to_json() const { return config_json(*this).dump(2) + "\n"; }

std::string PipelineConfig::hash() const { return fnv1a_hex(config_json(*this).dump()); }

PipelineConfig PipelineConfig::from_json(std::string_view text) { return from_json(text, PipelineConfig{}); }

PipelineConfig PipelineConfig::from_json(std::string_view text, const PipelineConfig& base) {
  PipelineConfig c = base;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    fail(ErrorKind::kFormat, std::string("configuration is not valid JSON: ") + e.what());
  }
  try {
    auto num = [](double& dst) { return [&dst](const ordered_json& v) { dst = v.get<double>(); }; };
    auto integer = [](int& dst) { return [&dst](const ordered_json& v) { dst = v.get<int>(); }; };
    apply_object(j, "", {
        {"preset", [&](const ordered_json& v) { c.preset = v.get<std::string>(); }},
        {"minutes", num(c.minutes)},
        {"steps", integer(c.steps)},
        {"seed", [&](const ordered_json& v) { c.seed = v.get<std::uint64_t>(); }},
        {"features", [&](const ordered_json& v) { c.features = parse_feature_set(v.get<std::string>()); }},
        {"terrain", [&](const ordered_json& v) {
           apply_object(v, "terrain.", {
               {"kind", [&](const ordered_json& k) { c.terrain.kind = parse_terrain_kind(k.get<std::string>()); }},
               {"mu", num(c.terrain.mu)},
               {"mu_min", num(c.terrain.mu_min)},
               {"mu_max", num(c.terrain.mu_max)},
               {"levels", integer(c.terrain.levels)},
               {"patch_length", num(c.terrain.patch_length)},
               {"patches", [&](const ordered_json& ps) {
                  c.terrain.patches.clear();
                  for (const auto& p : ps) {
                    FrictionParams f;
                    f.segment_start = p.at("start").get<double>();
                    f.mu_xy = p.at("mu_xy").get<double>();
                    f.mu_z = p.contains("mu_z") ? p.at("mu_z").get<double>() : kDefaultTorsionFactor * f.mu_xy;
                    c.terrain.patches.push_back(f);
                  }
                }},
           });
         }},
        {"noise", [&](const ordered_json& v) {
           apply_object(v, "noise.", {{"acc", num(c.noise.acc)},
                                      {"gyro", num(c.noise.gyro)},
                                      {"acc_bias", num(c.noise.acc_bias)},
                                      {"gyro_bias", num(c.noise.gyro_bias)},
                                      {"force", num(c.noise.force)},
                                      {"torque", num(c.noise.torque)},
                                      {"force_bias", num(c.noise.force_bias)},
                                      {"torque_bias", num(c.noise.torque_bias)}});
         }},
        {"thresholds", [&](const ordered_json& v) {
           apply_object(v, "thresholds.", {{"f_min", num(c.thresholds.f_min)},
                                           {"eps_v", num(c.thresholds.eps_v)},
                                           {"eps_w", num(c.thresholds.eps_w)}});
         }},
        {"train", [&](const ordered_json& v) {
           apply_object(v, "train.", {{"epochs", integer(c.train.epochs)},
                                      {"batch_size", integer(c.train.batch_size)},
                                      {"seed", [&](const ordered_json& s) { c.train.seed = s.get<std::uint64_t>(); }},
                                      {"validation_fraction", num(c.train.validation_fraction)},
                                      {"lr", num(c.train.adam.lr)},
                                      {"beta1", num(c.train.adam.beta1)},
                                      {"beta2", num(c.train.adam.beta2)},
                                      {"eps", num(c.train.adam.eps)}});
         }},
        {"preprocess", [&](const ordered_json& v) {
           apply_object(v, "preprocess.", {
               {"standstill_seconds", num(c.standstill_seconds)},
               {"reject_outliers", [&](const ordered_json& r) {
                  if (r.is_null()) c.reject_outliers.reset();
                  else c.reject_outliers = r.get<bool>();
                }},
           });
         }},
        {"evaluate", [&](const ordered_json& v) {
           apply_object(v, "evaluate.", {
               {"normalization", [&](const ordered_json& n) { c.normalization = parse_normalization(n.get<std::string>()); }},
               {"cutoff", num(c.cutoff)},
               {"fcm", [&](const ordered_json& f) {
                  apply_object(f, "evaluate.fcm.", {{"m", num(c.fcm.m)},
                                                    {"batch_size", integer(c.fcm.batch_size)},
                                                    {"max_iter", integer(c.fcm.max_iter)},
                                                    {"tol", num(c.fcm.tol)}});
                }},
           });
         }},
    });
  } catch (const ordered_json::exception& e) {
    fail(ErrorKind::kUsage, std::string("invalid configuration: ") + e.what());
  }
  return c;
}

double infer_rate(const Stream& stream) {
  std::vector<double> dts;
  std::array<double, 2> last{NAN, NAN};
  for (const auto& s : stream) {
    double& prev = last[index(s.leg)];
    if (!std::isnan(prev)) dts.push_back(s.t - prev);
    prev = s.t;
  }
  if (dts.empty()) fail(ErrorKind::kInput, "cannot infer the sample rate of a stream this short");
  std::nth_element(dts.begin(), dts.begin() + static_cast<std::ptrdiff_t>(dts.size() / 2), dts.end());
  const double dt = dts[dts.size() / 2];
  for (double rate : {100.0, 500.0}) {
    if (std::abs(dt * rate - 1.0) < 1e-3) return rate;
  }
  fail(ErrorKind::kFormat, "unsupported sample period " + format_number(dt) + " s (need 100 or 500 Hz)");
}

GenerateResult cmd_generate(const PipelineConfig& cfg, const std::string& out_dir, const std::string& name) {
  cfg.validate();
  const RobotParams robot = robot_preset(cfg.preset);
  const bool scenario = cfg.terrain.kind == TerrainSpec::Kind::kScenario;
  const int n_steps = cfg.steps > 0 ? cfg.steps : (scenario ? 4 : steps_for_duration(robot, cfg.minutes * 60.0));
  // The slip scenario places one foothold per patch, so its steps are not jittered.
  const std::uint64_t gait_seed = scenario ? 0 : cfg.seed;
  const std::uint64_t noise_seed = cfg.seed + kNoiseSeedOffset;

  const Terrain terrain = cfg.terrain.build(robot, n_steps, cfg.seed);
  const auto frames = generate_gait_dataset(robot, terrain, n_steps, gait_seed);
  const auto labels = label_dataset(frames, robot, cfg.thresholds);
  Stream stream = to_stream(simulate_sensors(frames, cfg.noise, robot.sensor_rate, noise_seed));
  attach_labels(stream, labels);

  ensure_dir(out_dir);
  GenerateResult r;
  r.truth_path = join(out_dir, name + ".truth.csv");
  r.dataset_path = join(out_dir, name + ".csv");
  r.manifest_path = join(out_dir, name + ".manifest.json");
  const std::string truth = ground_truth_csv(frames);
  const std::string data = measured_csv(stream, true);
  write_text_file(r.truth_path, truth);
  write_text_file(r.dataset_path, data);
  r.dataset_hash = fnv1a_hex(data);
  r.rows = stream.size();

  std::map<std::string, long long> counts{{"stable", 0}, {"slip", 0}, {"no_contact", 0}};
  for (const auto& s : stream) ++counts[std::string(to_string(s.substate))];
  ordered_json m;
  m["command"] = "generate";
  m["config"] = config_json(cfg);
  m["config_hash"] = cfg.hash();
  m["seeds"] = {{"gait", gait_seed}, {"terrain", cfg.seed}, {"noise", noise_seed}};
  m["sensor_rate"] = robot.sensor_rate;
  m["steps"] = n_steps;
  m["duration_s"] = frames.empty() ? 0.0 : frames.back().t;
  m["rows"] = r.rows;
  m["substates"] = counts;
  m["files"] = {{"truth", {{"name", name + ".truth.csv"}, {"hash", fnv1a_hex(truth)}}},
                {"dataset", {{"name", name + ".csv"}, {"hash", r.dataset_hash}}}};
  write_manifest(r.manifest_path, m);
  return r;
}

PreprocessResult load_and_preprocess(const PipelineConfig& cfg, const std::string& data_path, FeatureSet features,
                                     bool reject_outliers, const NormalizationScale* scale) {
  return preprocess_loaded(cfg, read_measured_csv(data_path, true), features, reject_outliers, scale);
}

TrainResult cmd_train(const PipelineConfig& cfg, const std::string& data_path, const std::string& model_path,
                      const std::string& history_path) {
  cfg.validate();
  const LoadedData data = load_dataset(data_path, true);
  const PreprocessResult pre = preprocess_loaded(cfg, data.raw, cfg.features, reject_for(cfg, true), nullptr);
  NetworkConfig net;
  net.input_dim = static_cast<int>(feature_dim(cfg.features));
  TrainResult r = train(pre.matrix.x, pre.matrix.labels, net, cfg.train, pre.matrix.scale, cfg.features);

  const std::string model_text = model_to_json(r.model);
  write_text_file(model_path, model_text);
  CsvTable h;
  h.header = {"epoch", "loss", "accuracy", "val_loss", "val_accuracy"};
  for (const auto& e : r.history) {
    h.rows.push_back({std::to_string(e.epoch), format_number(e.loss), format_number(e.accuracy),
                      format_number(e.val_loss), format_number(e.val_accuracy)});
  }
  if (!history_path.empty()) write_text_file(history_path, to_csv(h));

  ordered_json m;
  m["command"] = "train";
  m["config"] = config_json(cfg);
  m["config_hash"] = cfg.hash();
  m["dataset"] = {{"name", std::filesystem::path(data_path).filename().string()}, {"hash", data.hash}};
  m["rows"] = pre.matrix.rows();
  m["outliers"] = pre.outliers;
  m["model_hash"] = fnv1a_hex(model_text);
  write_manifest(model_path + ".manifest.json", m);
  return r;
}

std::vector<std::string> cmd_predict(const PipelineConfig& cfg, const std::string& model_path,
                                     const std::string& data_path, const std::string& out_path) {
  cfg.validate();
  const MlpModel model = load_model(model_path);
  const Stream raw = read_measured_csv(data_path, false);
  std::vector<std::string> warnings;
  if (raw.empty()) {
    warnings.push_back("dataset '" + data_path + "' has no rows; wrote an empty prediction file");
    write_text_file(out_path, predictions_csv({}));
    return warnings;
  }
  const PreprocessResult pre = preprocess_loaded(cfg, raw, model.features, reject_for(cfg, false),
                                                 cfg.normalization == Normalization::kModel ? &model.scale : nullptr);
  warnings = pre.warnings;
  const std::vector<double> p = predict_proba(model, pre.matrix);
  std::vector<int> cls(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) cls[i] = p[i] >= cfg.cutoff ? 1 : 0;
  write_text_file(out_path, predictions_csv(rows_for(pre.stream, p, cls)));
  return warnings;
}

namespace {

struct Scored {
  EvalReport report;
  Stream stream;  // the 100 Hz rows behind the report
};

Scored evaluate_one(const PipelineConfig& cfg, const MlpModel* model, const std::string& data_path,
                    bool use_model) {
  const LoadedData data = load_dataset(data_path, true);
  const FeatureSet features = model ? model->features : FeatureSet::kFull;
  const bool model_scale = model && cfg.normalization == Normalization::kModel;
  const PreprocessResult pre = preprocess_loaded(cfg, data.raw, features, reject_for(cfg, false),
                                                 model_scale ? &model->scale : nullptr);
  CompareConfig cc = compare_config(cfg);
  cc.lcd = use_model;
  if (cfg.normalization == Normalization::kDataset) cc.dataset_scale = pre.matrix.scale;
  EvalReport r = compare_methods(pre.stream, model, cc, stem_of(data_path));
  r.fingerprints["dataset_hash"] = data.hash;
  r.fingerprints["config_hash"] = cfg.hash();
  r.fingerprints["outliers_dropped"] = reject_for(cfg, false) ? std::to_string(pre.outliers) : "0";
  return {std::move(r), pre.stream};
}

}  // namespace

std::vector<EvalReport> cmd_evaluate(const PipelineConfig& cfg, const std::string& model_path,
                                     const std::vector<std::string>& data_paths, const std::string& out_dir,
                                     const EvaluateOptions& opt) {
  cfg.validate();
  if (data_paths.empty()) fail(ErrorKind::kUsage, "evaluate needs at least one dataset");
  const MlpModel model = load_model(model_path);
  ensure_dir(out_dir);
  std::vector<EvalReport> reports;
  CsvTable combined;
  for (const auto& path : data_paths) {
    auto [r, scored] = evaluate_one(cfg, &model, path, true);
    const std::string stem = stem_of(path);
    if (opt.csv) export_report(r, join(out_dir, stem + ".report.csv"), "csv");
    if (opt.json) export_report(r, join(out_dir, stem + ".report.json"), "json");
    if (opt.trace) {
      std::vector<int> y(scored.size());
      for (std::size_t i = 0; i < scored.size(); ++i) y[i] = scored[i].label;
      for (const auto& m : r.methods) {
        write_text_file(join(out_dir, stem + "." + m.name + ".trace.csv"), trace_csv(rows_for(scored, m.p_sc, y)));
      }
    }
    const CsvTable one = parse_csv(report_csv(r));
    if (combined.header.empty()) combined.header = one.header;
    combined.rows.insert(combined.rows.end(), one.rows.begin(), one.rows.end());
    reports.push_back(std::move(r));
  }
  write_text_file(join(out_dir, "combined.csv"), to_csv(combined));
  return reports;
}

EvalReport cmd_compare(const PipelineConfig& cfg, const std::string& data_path, const std::string& model_path,
                       const std::string& out_dir) {
  cfg.validate();
  std::optional<MlpModel> model;
  if (!model_path.empty()) model = load_model(model_path);
  auto [r, scored] = evaluate_one(cfg, model ? &*model : nullptr, data_path, model.has_value());
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    for (const auto& m : r.methods) {
      write_text_file(join(out_dir, m.name + ".predictions.csv"), predictions_csv(rows_for(scored, m.p_sc, m.preds)));
    }
  }
  return r;
}

std::string format_report_table(const std::vector<EvalReport>& reports) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %-6s %8s %8s\n", "dataset", "method", "SC(%)", "UC(%)");
  out += line;
  for (const auto& r : reports) {
    for (const auto& m : r.methods) {
      std::snprintf(line, sizeof line, "%-28s %-6s %8.1f %8.1f\n", r.dataset_id.c_str(), m.name.c_str(),
                    m.accuracy.sc, m.accuracy.uc);
      out += line;
    }
  }
  return out;
}

}  // namespace lcd
