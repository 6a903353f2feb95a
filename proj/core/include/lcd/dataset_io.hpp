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

#ifndef LCD_DATASET_IO_HPP_
#define LCD_DATASET_IO_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcd/gait_sim.hpp"
#include "lcd/preprocess.hpp"

namespace lcd {

// Whole-file helpers; failures throw ErrorKind::kIo.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

// Shortest-ish fixed-width rendering used by every CSV writer: 9 significant digits.
std::string format_number(double v);
void append_number(std::string& out, double v);

// Small generic table for reports and prediction files.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws ErrorKind::kSchema when the column is absent.
  std::size_t column(std::string_view name) const;
};
CsvTable parse_csv(std::string_view text);
std::string to_csv(const CsvTable& table);

// Parses a whole field as a double; ErrorKind::kFormat otherwise.
double parse_double(std::string_view field);

std::string ground_truth_csv(std::span<const GroundTruthFrame> frames);

// Measured columns, plus label and substate when `labeled`.
std::string measured_csv(const Stream& stream, bool labeled);
// Reads a measured or labeled CSV. With `require_labels`, a missing label
// column is a schema error.
Stream parse_measured_csv(std::string_view text, bool require_labels);
Stream read_measured_csv(const std::string& path, bool require_labels);

std::string feature_csv(const FeatureMatrix& m);

struct PredictionRow {
  double t = 0.0;
  Leg leg = Leg::kLeft;
  double p_sc = 0.0;
  int label = 0;  // predicted class (1 SC) or ground truth in traces
};
std::string predictions_csv(std::span<const PredictionRow> rows);
std::vector<PredictionRow> parse_predictions_csv(std::string_view text);
std::string trace_csv(std::span<const PredictionRow> rows);

}  // namespace lcd

#endif  // LCD_DATASET_IO_HPP_
