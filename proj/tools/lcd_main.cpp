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

// lcd: generate gait datasets, train the contact classifier, predict,
// evaluate against the baselines and compare detectors.
//
// Exit codes: 0 success, 2 usage, 3 format/schema, 4 numeric failure.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lcd/dataset_io.hpp"
#include "lcd/error.hpp"
#include "lcd/pipeline.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumeric = 4;

// Flags that override the config file. Unset means "keep the config value".
struct Overrides {
  std::optional<std::string> preset;
  std::optional<double> mu;
  std::optional<std::string> mu_sweep;
  bool scenario = false;
  std::optional<double> minutes;
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> features;
  std::optional<int> epochs;
  std::optional<int> batch_size;
  std::optional<std::uint64_t> train_seed;
  std::optional<double> validation;
  std::optional<double> lr;
  std::optional<std::string> normalization;
  std::optional<double> cutoff;
  std::optional<bool> reject_outliers;
  std::optional<double> standstill;

  void apply(lcd::PipelineConfig& c) const {
    if (preset) c.preset = *preset;
    if (mu) {
      c.terrain.kind = lcd::TerrainSpec::Kind::kUniform;
      c.terrain.mu = *mu;
    }
    if (mu_sweep) {
      const auto colon = mu_sweep->find(':');
      if (colon == std::string::npos) lcd::fail(lcd::ErrorKind::kUsage, "--mu-sweep expects MIN:MAX");
      try {
        c.terrain.kind = lcd::TerrainSpec::Kind::kMixed;
        c.terrain.mu_min = lcd::parse_double(mu_sweep->substr(0, colon));
        c.terrain.mu_max = lcd::parse_double(mu_sweep->substr(colon + 1));
      } catch (const lcd::Error&) {
        lcd::fail(lcd::ErrorKind::kUsage, "--mu-sweep expects MIN:MAX, got '" + *mu_sweep + "'");
      }
    }
    if (scenario) c.terrain.kind = lcd::TerrainSpec::Kind::kScenario;
    if (minutes) c.minutes = *minutes;
    if (steps) c.steps = *steps;
    if (seed) c.seed = *seed;
    if (features) c.features = lcd::parse_feature_set(*features);
    if (epochs) c.train.epochs = *epochs;
    if (batch_size) c.train.batch_size = *batch_size;
    if (train_seed) c.train.seed = *train_seed;
    if (validation) c.train.validation_fraction = *validation;
    if (lr) c.train.adam.lr = *lr;
    if (normalization) c.normalization = lcd::parse_normalization(*normalization);
    if (cutoff) c.cutoff = *cutoff;
    if (reject_outliers) c.reject_outliers = *reject_outliers;
    if (standstill) c.standstill_seconds = *standstill;
  }
};

void add_preprocess_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--standstill", o.standstill, "Seconds of initial standstill used for bias removal");
  cmd->add_option("--reject-outliers", o.reject_outliers, "Drop 3-sigma outlier rows (true/false)");
}

void add_scoring_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--normalization", o.normalization, "Feature scale: model (frozen) or dataset")
      ->check(CLI::IsMember({"model", "dataset"}));
  cmd->add_option("--cutoff", o.cutoff, "SC probability cutoff");
  cmd->add_option("--seed", o.seed, "Seed for the FCM baseline");
  add_preprocess_flags(cmd, o);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact detection for legged robots from F/T and IMU data"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON configuration file");

  Overrides o;

  std::string out_dir = ".";
  std::string name = "dataset";
  auto* gen = app.add_subcommand("generate", "Simulate a walking dataset with labels and ground truth");
  gen->add_option("--preset", o.preset, "Robot preset")->check(CLI::IsMember({"atlas-like", "talos-like", "nao-like"}));
  auto* mu_opt = gen->add_option("--mu", o.mu, "Uniform friction coefficient");
  auto* sweep_opt = gen->add_option("--mu-sweep", o.mu_sweep, "Mixed friction terrain MIN:MAX");
  auto* scen_opt = gen->add_flag("--slip-scenario", o.scenario, "Four-step 0.5/0.05/0.1/0.5 slip scenario");
  mu_opt->excludes(sweep_opt)->excludes(scen_opt);
  sweep_opt->excludes(scen_opt);
  gen->add_option("--minutes", o.minutes, "Approximate walking time");
  gen->add_option("--steps", o.steps, "Number of steps (overrides --minutes)");
  gen->add_option("--seed", o.seed, "Gait, terrain and noise seed");
  gen->add_option("-o,--out", out_dir, "Output directory");
  gen->add_option("--name", name, "Output file stem");

  std::string data_path, model_path, history_path, pred_path;
  auto* tr = app.add_subcommand("train", "Train the classifier on a labeled dataset");
  tr->add_option("-d,--data", data_path, "Labeled dataset CSV")->required();
  tr->add_option("-m,--model", model_path, "Model file to write")->required();
  tr->add_option("--history", history_path, "Training history CSV");
  tr->add_option("--features", o.features, "full or reduced")->check(CLI::IsMember({"full", "reduced"}));
  tr->add_option("--epochs", o.epochs, "Training epochs");
  tr->add_option("--batch-size", o.batch_size, "Mini-batch size");
  tr->add_option("--seed", o.train_seed, "Training seed");
  tr->add_option("--validation", o.validation, "Held-out validation fraction");
  tr->add_option("--lr", o.lr, "Adam learning rate");
  add_preprocess_flags(tr, o);

  auto* pr = app.add_subcommand("predict", "Write per-sample SC probabilities");
  pr->add_option("-m,--model", model_path, "Model file")->required();
  pr->add_option("-d,--data", data_path, "Measured or labeled dataset CSV")->required();
  pr->add_option("-o,--out", pred_path, "Predictions CSV")->required();
  pr->add_option("--normalization", o.normalization, "Feature scale: model (frozen) or dataset")
      ->check(CLI::IsMember({"model", "dataset"}));
  pr->add_option("--cutoff", o.cutoff, "SC probability cutoff");
  add_preprocess_flags(pr, o);

  std::vector<std::string> datasets;
  bool trace = false;
  std::string format = "both";
  std::string eval_dir = "reports";
  auto* ev = app.add_subcommand("evaluate", "Score the model and the baselines on labeled datasets");
  ev->add_option("-m,--model", model_path, "Model file")->required();
  ev->add_option("-d,--data", datasets, "Labeled dataset CSVs")->required();
  ev->add_option("-o,--out", eval_dir, "Report directory");
  ev->add_flag("--trace", trace, "Write per-method probability traces");
  ev->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json", "both"}));
  add_scoring_flags(ev, o);

  std::string cmp_dir;
  auto* cmp = app.add_subcommand("compare", "Run every detector on one dataset and print the table");
  cmp->add_option("-d,--data", data_path, "Labeled dataset CSV")->required();
  cmp->add_option("-m,--model", model_path, "Model file (LCD is skipped without one)");
  cmp->add_option("-o,--out", cmp_dir, "Directory for per-detector prediction CSVs");
  add_scoring_flags(cmp, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    lcd::PipelineConfig cfg;
    if (!config_path.empty()) cfg = lcd::PipelineConfig::from_json(lcd::read_text_file(config_path));
    o.apply(cfg);
    cfg.validate();

    if (gen->parsed()) {
      const auto r = lcd::cmd_generate(cfg, out_dir, name);
      std::cout << "wrote " << r.dataset_path << " (" << r.rows << " rows, hash " << r.dataset_hash << ")\n"
                << "wrote " << r.truth_path << "\nwrote " << r.manifest_path << "\n";
    } else if (tr->parsed()) {
      const auto r = lcd::cmd_train(cfg, data_path, model_path, history_path);
      const auto& last = r.history.back();
      std::printf("trained %d epochs: loss %.5f accuracy %.4f\nwrote %s\n", last.epoch, last.loss, last.accuracy,
                  model_path.c_str());
    } else if (pr->parsed()) {
      print_warnings(lcd::cmd_predict(cfg, model_path, data_path, pred_path));
      std::cout << "wrote " << pred_path << "\n";
    } else if (ev->parsed()) {
      lcd::EvaluateOptions opt;
      opt.trace = trace;
      opt.csv = format != "json";
      opt.json = format != "csv";
      const auto reports = lcd::cmd_evaluate(cfg, model_path, datasets, eval_dir, opt);
      std::cout << lcd::format_report_table(reports);
    } else if (cmp->parsed()) {
      const auto report = lcd::cmd_compare(cfg, data_path, model_path, cmp_dir);
      std::cout << lcd::format_report_table({report});
    }
  } catch (const lcd::Error& e) {
    std::cerr << "error (" << lcd::to_string(e.kind()) << "): " << e.what() << "\n";
    return lcd::exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error (format): " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
