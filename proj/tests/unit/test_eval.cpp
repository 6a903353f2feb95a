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


#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lcd/eval.hpp"
#include "test_support.hpp"

namespace lcd {
namespace {

using lcd::testing::error_kind_of;

TEST(PerClass, PerfectAndDegeneratePredictors) {
  std::vector<int> y;
  for (int i = 0; i < 100; ++i) y.push_back(i < 60 ? 1 : 0);
  const auto perfect = per_class_accuracy(y, y);
  EXPECT_EQ(perfect.sc, 100.0);
  EXPECT_EQ(perfect.uc, 100.0);
  const auto all_sc = per_class_accuracy(std::vector<int>(100, 1), y);
  EXPECT_EQ(all_sc.sc, 100.0);
  EXPECT_EQ(all_sc.uc, 0.0);
}

TEST(PerClass, HandCountedCase) {
  // labels: 6 SC, 4 UC. SC hits 4 of 6, UC hits 3 of 4.
  const std::vector<int> y{1, 1, 1, 1, 1, 1, 0, 0, 0, 0};
  const std::vector<int> p{1, 0, 1, 1, 0, 1, 0, 1, 0, 0};
  const auto cm = confusion_matrix(p, y);
  EXPECT_EQ(cm, (ConfusionMatrix{4, 1, 3, 2}));
  EXPECT_EQ(cm.total(), 10);
  const auto acc = per_class_accuracy(p, y);
  EXPECT_DOUBLE_EQ(acc.sc, 400.0 / 6.0);
  EXPECT_DOUBLE_EQ(acc.uc, 75.0);
}

TEST(PerClass, ConfusionAgreesWithDirectCountAndSwapSymmetry) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5 + rng() % 200;
    std::vector<int> y(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(rng() % 2);
      p[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    double sc_hit = 0, sc = 0, uc_hit = 0, uc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      (y[i] == 1 ? sc : uc) += 1;
      if (y[i] == p[i]) (y[i] == 1 ? sc_hit : uc_hit) += 1;
    }
    const auto acc = per_class_accuracy(confusion_matrix(p, y));
    ASSERT_DOUBLE_EQ(acc.sc, 100.0 * sc_hit / sc);
    ASSERT_DOUBLE_EQ(acc.uc, 100.0 * uc_hit / uc);
    std::vector<int> ys(y), ps(p);
    for (auto& v : ys) v = 1 - v;
    for (auto& v : ps) v = 1 - v;
    const auto swapped = per_class_accuracy(ps, ys);
    ASSERT_DOUBLE_EQ(swapped.sc, acc.uc);
    ASSERT_DOUBLE_EQ(swapped.uc, acc.sc);
  }
}

TEST(PerClass, MissingClassOrLengthMismatch) {
  const std::vector<int> ones(5, 1);
  EXPECT_EQ(error_kind_of([&] { per_class_accuracy(ones, ones); }), ErrorKind::kEvaluation);
  const std::vector<int> short_p(3, 1);
  EXPECT_EQ(error_kind_of([&] { confusion_matrix(short_p, ones); }), ErrorKind::kEvaluation);
}

TEST(Hash, Fnv1aReferenceVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(NormalizationNames, RoundTrip) {
  EXPECT_EQ(parse_normalization("dataset"), Normalization::kDataset);
  EXPECT_EQ(to_string(Normalization::kModel), "model");
  EXPECT_EQ(error_kind_of([] { parse_normalization("zscore"); }), ErrorKind::kUsage);
}

// Synthetic labeled stream: contact phases carry a large vertical force, swing
// phases near zero, with some loaded UC samples standing in for slips.
Stream synthetic_stream(std::uint64_t seed, std::size_t ticks, double slip_share) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Stream s;
  for (std::size_t i = 0; i < ticks; ++i) {
    for (Leg leg : kLegs) {
      const bool stance = ((i / 40) + index(leg)) % 5 != 0;
      Sample smp{i / 100.0, leg, {}, stance ? 1 : 0, stance ? Substate::kStable : Substate::kNoContact};
      for (double& v : smp.x) v = 0.1 * n(rng);
      smp.x[kChannelFz] = stance ? 800.0 + 20.0 * n(rng) : 2.0 * std::abs(n(rng));
      if (stance && u(rng) < slip_share) {
        smp.label = 0;
        smp.substate = Substate::kSlip;
        smp.x[0] = 40.0 + n(rng);
      }
      s.push_back(smp);
    }
  }
  return s;
}

TEST(Compare, SingleFrictionBaselinesAreAccurate) {
  const auto s = synthetic_stream(3, 2000, 0.0);
  CompareConfig cfg;
  cfg.lcd = false;
  cfg.fcm = false;
  const auto r = compare_methods(s, nullptr, cfg, "single");
  ASSERT_EQ(r.methods.size(), 2u);
  for (const auto& m : r.methods) {
    EXPECT_GE(m.accuracy.sc, 90.0) << m.name;
    EXPECT_EQ(m.confusion.total(), static_cast<long long>(s.size()));
  }
  EXPECT_EQ(r.n_sc + r.n_uc, static_cast<long long>(s.size()));
  EXPECT_EQ(r.fingerprints.at("rows"), std::to_string(s.size()));
}

TEST(Compare, LoadedSlipsFoolForceThresholds) {
  const auto s = synthetic_stream(4, 2000, 0.3);
  CompareConfig cfg;
  cfg.lcd = false;
  const auto r = compare_methods(s, nullptr, cfg, "slippy");
  ASSERT_EQ(r.methods.size(), 3u);
  EXPECT_LT(r.method("T").accuracy.uc, 60.0);
  EXPECT_LT(r.method("ST").accuracy.uc, 60.0);
  EXPECT_EQ(r.method("FCM").p_sc.size(), s.size());
  EXPECT_EQ(error_kind_of([&] { r.method("LCD"); }), ErrorKind::kEvaluation);
  // Seeded FCM makes the whole comparison reproducible.
  EXPECT_EQ(report_csv(compare_methods(s, nullptr, cfg, "slippy")), report_csv(r));
}

TEST(Compare, Errors) {
  auto s = synthetic_stream(5, 50, 0.0);
  CompareConfig cfg;
  EXPECT_EQ(error_kind_of([&] { compare_methods(s, nullptr, cfg); }), ErrorKind::kUsage);
  cfg.lcd = false;
  s[3].label = kUnlabeled;
  EXPECT_EQ(error_kind_of([&] { compare_methods(s, nullptr, cfg); }), ErrorKind::kEvaluation);
  auto all_sc = synthetic_stream(5, 50, 0.0);
  for (auto& smp : all_sc) smp.label = 1;
  EXPECT_EQ(error_kind_of([&] { compare_methods(all_sc, nullptr, cfg); }), ErrorKind::kEvaluation);
}

TEST(Report, CsvRoundTripIsStable) {
  CompareConfig cfg;
  cfg.lcd = false;
  const auto r = compare_methods(synthetic_stream(6, 300, 0.2), nullptr, cfg, "rt");
  const auto csv = report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "dataset,method,sc_pct,uc_pct,tp,fp,tn,fn,n_sc,n_uc,params");
  const auto parsed = parse_report_csv(csv);
  EXPECT_EQ(report_csv(parsed), csv);
  ASSERT_EQ(parsed.methods.size(), r.methods.size());
  for (std::size_t i = 0; i < r.methods.size(); ++i) {
    EXPECT_EQ(parsed.methods[i].confusion, r.methods[i].confusion);
    EXPECT_EQ(parsed.methods[i].params, r.methods[i].params);
  }
  EXPECT_NE(r.method("ST").params.find(';'), std::string::npos);
}

TEST(Report, JsonCarriesFingerprints) {
  CompareConfig cfg;
  cfg.lcd = false;
  cfg.seed = 1234;
  auto r = compare_methods(synthetic_stream(7, 300, 0.2), nullptr, cfg, "js");
  r.fingerprints["dataset_hash"] = fnv1a_hex("payload");
  const auto j = report_json(r);
  EXPECT_NE(j.find("\"seed\": \"1234\""), std::string::npos) << j;
  EXPECT_NE(j.find(fnv1a_hex("payload")), std::string::npos);
  EXPECT_EQ(error_kind_of([&] { export_report(r, "/tmp/x", "xml"); }), ErrorKind::kUsage);
}

}  // namespace
}  // namespace lcd
