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

#ifndef TABMIA_EVALUATION_METRICS_H_
#define TABMIA_EVALUATION_METRICS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace tabmia {

inline constexpr double kDefaultFprLevel = 0.10;

// Threshold sweep over the distinct scores, highest first. A record is
// flagged as a member when its score is >= the threshold, so tied scores
// always move together. The first point is (0, 0) at threshold +inf and the
// last is (1, 1) at the lowest score.
struct RocCurve {
  std::vector<double> thresholds;
  std::vector<double> fpr;
  std::vector<double> tpr;
};

// Labels are 1 for members and 0 for holdout. All of these fail unless both
// classes are present and every score is finite.
absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> scores,
                                    std::span<const int> labels);

// Mann-Whitney statistic: P(member score > holdout score) plus half the
// probability of a tie.
absl::StatusOr<double> Auc(std::span<const double> scores,
                           std::span<const int> labels);

// Trapezoidal area under a curve from ComputeRoc.
double AucFromCurve(const RocCurve& curve);

// Largest TPR over the operating points whose FPR is <= fpr_level. No
// interpolation between points.
absl::StatusOr<double> TprAtFpr(std::span<const double> scores,
                                std::span<const int> labels,
                                double fpr_level = kDefaultFprLevel);
double TprAtFpr(const RocCurve& curve, double fpr_level = kDefaultFprLevel);

struct MetricReport {
  std::string id;
  double auc = 0.5;
  // Keyed by the FPR level formatted with two decimals, e.g. "0.10".
  std::map<std::string, double> tpr_at_fpr;
  size_t n_pos = 0;
  size_t n_neg = 0;

  nlohmann::json ToJson() const;
};

std::string FprLevelKey(double level);

absl::StatusOr<MetricReport> ComputeReport(
    std::string id, std::span<const double> scores, std::span<const int> labels,
    std::span<const double> fpr_levels = {});

// Writes metrics.json (an array of reports in the given order) and, for every
// report with a curve in `curves`, roc_<id>.csv (threshold,fpr,tpr) and
// roc_<id>.svg.
absl::Status EmitReport(const std::vector<MetricReport>& reports,
                        const std::map<std::string, RocCurve>& curves,
                        const std::filesystem::path& out_dir);

std::string RocCsv(const RocCurve& curve);
std::string RocSvg(const std::string& title, const RocCurve& curve);

}  // namespace tabmia

#endif  // TABMIA_EVALUATION_METRICS_H_
