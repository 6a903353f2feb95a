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

#include "lcd/dataset_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lcd/error.hpp"

namespace lcd {

namespace {

constexpr std::array<std::string_view, 14> kMeasuredColumns = {
    "t", "leg", "fx", "fy", "fz", "tx", "ty", "tz", "ax", "ay", "az", "wx", "wy", "wz"};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Iterates lines, dropping a trailing '\r' and skipping blank lines.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++number_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) return true;
    }
    return false;
  }
  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

int find_column(const std::vector<std::string_view>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::kIo, "error while reading '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) fail(ErrorKind::kIo, "error while writing '" + path + "'");
}

void append_number(std::string& out, double v) {
  std::array<char, 32> buf{};
  if (v == 0.0) v = 0.0;  // drop negative zero
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 9);
  out.append(buf.data(), r.ptr);
}

std::string format_number(double v) {
  std::string s;
  append_number(s, v);
  return s;
}

double parse_double(std::string_view field) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last || field.empty()) {
    fail(ErrorKind::kFormat, "not a number: '" + std::string(field) + "'");
  }
  return v;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  fail(ErrorKind::kSchema, "missing column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  LineReader lines(text);
  std::string_view line;
  if (!lines.next(line)) return t;
  for (auto f : split(line)) t.header.emplace_back(f);
  while (lines.next(line)) {
    const auto fields = split(line);
    if (fields.size() != t.header.size()) {
      fail(ErrorKind::kFormat, "line " + std::to_string(lines.number()) + " has " +
                                   std::to_string(fields.size()) + " fields, expected " +
                                   std::to_string(t.header.size()));
    }
    t.rows.emplace_back(fields.begin(), fields.end());
  }
  return t;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto row = [&out](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i];
    }
    out += '\n';
  };
  row(table.header);
  for (const auto& r : table.rows) row(r);
  return out;
}

std::string ground_truth_csv(std::span<const GroundTruthFrame> frames) {
  std::string out = "t,leg,fx,fy,fz,tx,ty,tz,ax,ay,az,wx,wy,wz,vx,vy,vz,mode,mu_xy,mu_z\n";
  out.reserve(out.size() + frames.size() * 2 * 200);
  for (const auto& f : frames) {
    for (Leg leg : kLegs) {
      const FootState& foot = f.foot(leg);
      const Wrench& w = f.wrench_of(leg);
      const Mat3 r = foot.world_to_foot();
      const Vec3 acc = r * foot.lin_acc;
      const Vec3 ang = r * foot.ang_vel;
      const Vec3 vel = r * foot.lin_vel;
      append_number(out, f.t);
      out += ',';
      out += to_string(leg);
      for (const Vec3* v : {&w.force, &w.torque, &acc, &ang, &vel}) {
        for (int k = 0; k < 3; ++k) {
          out += ',';
          append_number(out, (*v)[k]);
        }
      }
      out += ',';
      out += to_string(foot.mode);
      out += ',';
      append_number(out, f.friction[index(leg)].mu_xy);
      out += ',';
      append_number(out, f.friction[index(leg)].mu_z);
      out += '\n';
    }
  }
  return out;
}

std::string measured_csv(const Stream& stream, bool labeled) {
  std::string out;
  for (std::size_t i = 0; i < kMeasuredColumns.size(); ++i) {
    if (i) out += ',';
    out += kMeasuredColumns[i];
  }
  out += labeled ? ",label,substate\n" : "\n";
  out.reserve(out.size() + stream.size() * 180);
  for (const auto& s : stream) {
    append_number(out, s.t);
    out += ',';
    out += to_string(s.leg);
    for (double v : s.x) {
      out += ',';
      append_number(out, v);
    }
    if (labeled) {
      if (s.label != 0 && s.label != 1) fail(ErrorKind::kInput, "labeled export of an unlabeled sample");
      out += s.label == 1 ? ",1," : ",0,";
      out += to_string(s.substate);
    }
    out += '\n';
  }
  return out;
}

Stream parse_measured_csv(std::string_view text, bool require_labels) {
  LineReader lines(text);
  std::string_view line;
  Stream out;
  if (!lines.next(line)) {
    if (require_labels) fail(ErrorKind::kSchema, "empty dataset has no label column");
    return out;
  }
  const auto header = split(line);
  std::array<int, kMeasuredColumns.size()> col{};
  for (std::size_t i = 0; i < kMeasuredColumns.size(); ++i) {
    col[i] = find_column(header, kMeasuredColumns[i]);
    if (col[i] < 0) fail(ErrorKind::kSchema, "missing column '" + std::string(kMeasuredColumns[i]) + "'");
  }
  const int label_col = find_column(header, "label");
  const int sub_col = find_column(header, "substate");
  if (require_labels && label_col < 0) fail(ErrorKind::kSchema, "missing column 'label'");

  std::vector<std::string_view> fields;
  while (lines.next(line)) {
    fields = split(line);
    if (fields.size() != header.size()) {
      fail(ErrorKind::kFormat, "line " + std::to_string(lines.number()) + " has " +
                                   std::to_string(fields.size()) + " fields, expected " +
                                   std::to_string(header.size()));
    }
    Sample s;
    s.t = parse_double(fields[static_cast<std::size_t>(col[0])]);
    s.leg = parse_leg(fields[static_cast<std::size_t>(col[1])]);
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      s.x[c] = parse_double(fields[static_cast<std::size_t>(col[c + 2])]);
    }
    if (label_col >= 0) {
      const auto l = fields[static_cast<std::size_t>(label_col)];
      if (l != "0" && l != "1") fail(ErrorKind::kFormat, "label must be 0 or 1, got '" + std::string(l) + "'");
      s.label = l == "1" ? 1 : 0;
      if (sub_col >= 0) {
        s.substate = parse_substate(fields[static_cast<std::size_t>(sub_col)]);
      } else {
        s.substate = s.label == 1 ? Substate::kStable : Substate::kSlip;
      }
      if ((s.label == 1) != (s.substate == Substate::kStable)) {
        fail(ErrorKind::kFormat, "label and substate disagree on line " + std::to_string(lines.number()));
      }
    }
    out.push_back(s);
  }
  return out;
}

Stream read_measured_csv(const std::string& path, bool require_labels) {
  return parse_measured_csv(read_text_file(path), require_labels);
}

std::string feature_csv(const FeatureMatrix& m) {
  std::string out;
  for (Eigen::Index c = 0; c < m.x.cols(); ++c) out += "f" + std::to_string(c) + ",";
  out += "label\n";
  for (Eigen::Index r = 0; r < m.x.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.x.cols(); ++c) {
      append_number(out, m.x(r, c));
      out += ',';
    }
    out += std::to_string(m.labels[static_cast<std::size_t>(r)]);
    out += '\n';
  }
  return out;
}

namespace {

std::string prediction_like_csv(std::span<const PredictionRow> rows, std::string_view last) {
  std::string out = "t,leg,p_sc,";
  out += last;
  out += '\n';
  for (const auto& r : rows) {
    append_number(out, r.t);
    out += ',';
    out += to_string(r.leg);
    out += ',';
    append_number(out, r.p_sc);
    out += ',';
    out += std::to_string(r.label);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string predictions_csv(std::span<const PredictionRow> rows) { return prediction_like_csv(rows, "class"); }

std::string trace_csv(std::span<const PredictionRow> rows) { return prediction_like_csv(rows, "y_sc"); }

std::vector<PredictionRow> parse_predictions_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  std::vector<PredictionRow> out;
  if (t.header.empty()) return out;
  const std::size_t ct = t.column("t"), cl = t.column("leg"), cp = t.column("p_sc"), cc = t.column("class");
  for (const auto& r : t.rows) {
    PredictionRow p;
    p.t = parse_double(r[ct]);
    p.leg = parse_leg(r[cl]);
    p.p_sc = parse_double(r[cp]);
    p.label = static_cast<int>(parse_double(r[cc]));
    out.push_back(p);
  }
  return out;
}

}  // namespace lcd
