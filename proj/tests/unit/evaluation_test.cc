//
// Copyright 2026 The Tabmia Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "tabmia/evaluation/metrics.h"
#include "tabmia/io.h"

namespace tabmia {
namespace {

struct Instance {
  std::vector<double> scores;
  std::vector<int> labels;
};

// Random instance with both classes and frequent ties.
Instance RandomInstance(std::mt19937_64& rng, size_t max_n) {
  std::uniform_int_distribution<size_t> size(2, max_n);
  const size_t n = size(rng);
  std::uniform_int_distribution<int> level(0, 9);
  Instance in;
  for (size_t i = 0; i < n; ++i) {
    in.scores.push_back(level(rng) * 0.1 + (rng() % 3 == 0 ? 0.0 : 0.01 * level(rng)));
    in.labels.push_back(static_cast<int>(rng() % 2));
  }
  in.labels[0] = 1;
  in.labels[1] = 0;
  return in;
}

double PairwiseAuc(const Instance& in) {
  double s = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < in.scores.size(); ++i) {
    if (in.labels[i] != 1) continue;
    for (size_t j = 0; j < in.scores.size(); ++j) {
      if (in.labels[j] != 0) continue;
      ++pairs;
      if (in.scores[i] > in.scores[j]) s += 1.0;
      if (in.scores[i] == in.scores[j]) s += 0.5;
    }
  }
  return s / static_cast<double>(pairs);
}

// Operating points of "flag when score >= threshold" for +inf and every
// distinct score, highest first.
RocCurve BruteForceRoc(const Instance& in) {
  std::set<double, std::greater<double>> distinct(in.scores.begin(),
                                                  in.scores.end());
  double pos = 0, neg = 0;
  for (int y : in.labels) (y ? pos : neg) += 1;
  RocCurve c;
  c.thresholds.push_back(INFINITY);
  c.fpr.push_back(0.0);
  c.tpr.push_back(0.0);
  for (double th : distinct) {
    double tp = 0, fp = 0;
    for (size_t i = 0; i < in.scores.size(); ++i) {
      if (in.scores[i] >= th) (in.labels[i] ? tp : fp) += 1;
    }
    c.thresholds.push_back(th);
    c.fpr.push_back(fp / neg);
    c.tpr.push_back(tp / pos);
  }
  return c;
}

double BruteForceTpr(const Instance& in, double level) {
  RocCurve c = BruteForceRoc(in);
  double best = 0.0;
  for (size_t i = 0; i < c.fpr.size(); ++i) {
    if (c.fpr[i] <= level) best = std::max(best, c.tpr[i]);
  }
  return best;
}

TEST(MetricsTest, HandExamples) {
  std::vector<double> s = {0.9, 0.8, 0.1, 0.2};
  std::vector<int> y = {1, 1, 0, 0};
  EXPECT_EQ(*Auc(s, y), 1.0);
  EXPECT_EQ(*TprAtFpr(s, y, 0.10), 1.0);
  auto roc = ComputeRoc(s, y);
  bool through_corner = false;
  for (size_t i = 0; i < roc->fpr.size(); ++i) {
    if (roc->fpr[i] == 0.0 && roc->tpr[i] == 1.0) through_corner = true;
  }
  EXPECT_TRUE(through_corner);
  std::vector<int> flipped = {0, 0, 1, 1};
  EXPECT_EQ(*Auc(s, flipped), 0.0);
}

TEST(MetricsTest, AllEqualScores) {
  std::vector<double> s(6, 0.3);
  std::vector<int> y = {1, 0, 1, 0, 1, 0};
  auto roc = ComputeRoc(s, y);
  ASSERT_TRUE(roc.ok());
  EXPECT_EQ(roc->fpr, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(roc->tpr, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(*Auc(s, y), 0.5);
  EXPECT_EQ(*TprAtFpr(s, y, 0.10), 0.0);
}

TEST(MetricsTest, Errors) {
  std::vector<double> s = {0.1, 0.2};
  EXPECT_FALSE(Auc(s, std::vector<int>{1, 1}).ok());
  EXPECT_FALSE(ComputeRoc(s, std::vector<int>{0, 0}).ok());
  EXPECT_FALSE(Auc(s, std::vector<int>{1}).ok());
  EXPECT_FALSE(Auc(std::vector<double>{0.1, NAN}, std::vector<int>{1, 0}).ok());
  EXPECT_FALSE(Auc(s, std::vector<int>{1, 2}).ok());
  EXPECT_FALSE(TprAtFpr(s, std::vector<int>{1, 0}, 0.0).ok());
  EXPECT_FALSE(TprAtFpr(s, std::vector<int>{1, 0}, 1.0).ok());
}

TEST(MetricsTest, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 300; ++rep) {
    Instance in = RandomInstance(rng, rep < 100 ? 20 : 200);
    auto roc = ComputeRoc(in.scores, in.labels);
    ASSERT_TRUE(roc.ok());
    RocCurve brute = BruteForceRoc(in);
    EXPECT_EQ(roc->thresholds, brute.thresholds);
    EXPECT_EQ(roc->fpr, brute.fpr);
    EXPECT_EQ(roc->tpr, brute.tpr);
    const double pairwise = PairwiseAuc(in);
    EXPECT_NEAR(*Auc(in.scores, in.labels), pairwise, 1e-12);
    EXPECT_NEAR(AucFromCurve(*roc), pairwise, 1e-12);
    for (double level : {0.05, 0.1, 0.25, 0.5}) {
      EXPECT_EQ(*TprAtFpr(in.scores, in.labels, level),
                BruteForceTpr(in, level));
    }
  }
}

TEST(MetricsTest, Properties) {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    Instance in = RandomInstance(rng, 120);
    const double auc = *Auc(in.scores, in.labels);
    std::vector<double> exp_s, affine_s;
    for (double v : in.scores) {
      exp_s.push_back(std::exp(3.0 * v));
      affine_s.push_back(2.5 * v - 7.0);
    }
    EXPECT_EQ(*Auc(exp_s, in.labels), auc);
    EXPECT_EQ(*Auc(affine_s, in.labels), auc);
    std::vector<int> flipped;
    for (int y : in.labels) flipped.push_back(1 - y);
    EXPECT_EQ(auc + *Auc(in.scores, flipped), 1.0);
    double prev = 0.0;
    for (double level = 0.01; level < 1.0; level += 0.01) {
      const double t = *TprAtFpr(in.scores, in.labels, level);
      EXPECT_GE(t, prev);
      prev = t;
    }
    auto roc = ComputeRoc(in.scores, in.labels);
    for (size_t i = 1; i < roc->fpr.size(); ++i) {
      EXPECT_GE(roc->fpr[i], roc->fpr[i - 1]);
      EXPECT_GE(roc->tpr[i], roc->tpr[i - 1]);
    }
    EXPECT_EQ(roc->fpr.back(), 1.0);
    EXPECT_EQ(roc->tpr.back(), 1.0);
  }
}

TEST(MetricsTest, ReportJsonShape) {
  std::vector<double> s = {0.9, 0.4, 0.5, 0.1};
  std::vector<int> y = {1, 1, 0, 0};
  std::vector<double> levels = {0.1, 0.5};
  auto r = ComputeReport("pooled", s, y, levels);
  ASSERT_TRUE(r.ok());
  nlohmann::json j = r->ToJson();
  EXPECT_EQ(j["id"], "pooled");
  EXPECT_EQ(j["auc"], 0.75);
  EXPECT_EQ(j["n_pos"], 2);
  EXPECT_EQ(j["n_neg"], 2);
  EXPECT_EQ(j["tpr_at_fpr"]["0.10"], 0.5);
  EXPECT_EQ(j["tpr_at_fpr"]["0.50"], 1.0);
  EXPECT_EQ(FprLevelKey(0.1), "0.10");
  auto d = ComputeReport("d", s, y);
  EXPECT_EQ(d->tpr_at_fpr.count("0.10"), 1u);
}

TEST(MetricsTest, EmitReportFilesAndDeterminism) {
  const std::filesystem::path dir =
      std::filesystem::path(testing::TempDir()) / "emit_report_test";
  std::filesystem::remove_all(dir);
  ASSERT_TRUE(EmitReport({}, {}, dir / "empty").ok());
  EXPECT_EQ(*ReadFileToString(dir / "empty" / "metrics.json"), "[]\n");
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir / "empty"),
                          std::filesystem::directory_iterator()),
            1);

  std::vector<double> s = {0.9, 0.4, 0.5, 0.1};
  std::vector<int> y = {1, 1, 0, 0};
  auto r = ComputeReport("white_box", s, y);
  std::map<std::string, RocCurve> curves = {{"white_box", *ComputeRoc(s, y)}};
  ASSERT_TRUE(EmitReport({*r}, curves, dir / "a").ok());
  ASSERT_TRUE(EmitReport({*r}, curves, dir / "b").ok());
  for (const char* f : {"metrics.json", "roc_white_box.csv",
                        "roc_white_box.svg"}) {
    auto a = ReadFileToString(dir / "a" / f);
    auto b = ReadFileToString(dir / "b" / f);
    ASSERT_TRUE(a.ok()) << f;
    EXPECT_EQ(*a, *b) << f;
  }
  const std::string csv = *ReadFileToString(dir / "a" / "roc_white_box.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "threshold,fpr,tpr");
  const std::string svg = *ReadFileToString(dir / "a" / "roc_white_box.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(MetricsTest, EmitReportUnwritableDirectory) {
  const std::filesystem::path file =
      std::filesystem::path(testing::TempDir()) / "emit_report_blocker";
  ASSERT_TRUE(WriteStringToFile(file, "x").ok());
  EXPECT_FALSE(EmitReport({}, {}, file / "sub").ok());
}

}  // namespace
}  // namespace tabmia
