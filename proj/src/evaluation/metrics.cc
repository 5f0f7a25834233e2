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

#include "tabmia/evaluation/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "tabmia/io.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

struct ClassCounts {
  size_t pos = 0;
  size_t neg = 0;
};

absl::StatusOr<ClassCounts> CheckInputs(std::span<const double> scores,
                                        std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        scores.size(), " scores but ", labels.size(), " labels"));
  }
  ClassCounts c;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("score ", i, " is not finite"));
    }
    if (labels[i] == 1) {
      ++c.pos;
    } else if (labels[i] == 0) {
      ++c.neg;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", i, " is ", labels[i], ", expected 0 or 1"));
    }
  }
  if (c.pos == 0 || c.neg == 0) {
    return absl::InvalidArgumentError(
        "metrics need both member and holdout labels");
  }
  return c;
}

}  // namespace

absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> scores,
                                    std::span<const int> labels) {
  TABMIA_ASSIGN_OR_RETURN(ClassCounts counts, CheckInputs(scores, labels));
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.thresholds.push_back(std::numeric_limits<double>::infinity());
  curve.fpr.push_back(0.0);
  curve.tpr.push_back(0.0);
  size_t tp = 0, fp = 0;
  const double n_pos = static_cast<double>(counts.pos);
  const double n_neg = static_cast<double>(counts.neg);
  for (size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      if (labels[order[i]] == 1) {
        ++tp;
      } else {
        ++fp;
      }
    }
    curve.thresholds.push_back(s);
    curve.fpr.push_back(static_cast<double>(fp) / n_neg);
    curve.tpr.push_back(static_cast<double>(tp) / n_pos);
  }
  return curve;
}

absl::StatusOr<double> Auc(std::span<const double> scores,
                           std::span<const int> labels) {
  TABMIA_ASSIGN_OR_RETURN(ClassCounts counts, CheckInputs(scores, labels));
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Sum of member ranks with ties sharing their mean rank. Ranks are kept
  // doubled so tied means stay integral.
  double doubled_rank_sum = 0.0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    size_t members = 0;
    for (; j < order.size() && scores[order[j]] == scores[order[i]]; ++j) {
      members += labels[order[j]] == 1;
    }
    // Ranks i+1..j have mean (i + 1 + j) / 2.
    doubled_rank_sum +=
        static_cast<double>(members) * static_cast<double>(i + 1 + j);
    i = j;
  }
  const double n_pos = static_cast<double>(counts.pos);
  const double n_neg = static_cast<double>(counts.neg);
  const double u = doubled_rank_sum / 2.0 - n_pos * (n_pos + 1.0) / 2.0;
  return u / (n_pos * n_neg);
}

double AucFromCurve(const RocCurve& curve) {
  double area = 0.0;
  for (size_t i = 1; i < curve.fpr.size(); ++i) {
    area += (curve.fpr[i] - curve.fpr[i - 1]) *
            (curve.tpr[i] + curve.tpr[i - 1]) / 2.0;
  }
  return area;
}

double TprAtFpr(const RocCurve& curve, double fpr_level) {
  double best = 0.0;
  for (size_t i = 0; i < curve.fpr.size(); ++i) {
    if (curve.fpr[i] <= fpr_level) best = std::max(best, curve.tpr[i]);
  }
  return best;
}

absl::StatusOr<double> TprAtFpr(std::span<const double> scores,
                                std::span<const int> labels,
                                double fpr_level) {
  if (!(fpr_level > 0.0 && fpr_level < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("FPR level ", fpr_level, " outside (0, 1)"));
  }
  TABMIA_ASSIGN_OR_RETURN(RocCurve curve, ComputeRoc(scores, labels));
  return TprAtFpr(curve, fpr_level);
}

std::string FprLevelKey(double level) {
  return absl::StrFormat("%.2f", level);
}

nlohmann::json MetricReport::ToJson() const {
  nlohmann::json tpr = nlohmann::json::object();
  for (const auto& [k, v] : tpr_at_fpr) tpr[k] = v;
  return {{"id", id},
          {"auc", auc},
          {"tpr_at_fpr", tpr},
          {"n_pos", n_pos},
          {"n_neg", n_neg}};
}

absl::StatusOr<MetricReport> ComputeReport(std::string id,
                                           std::span<const double> scores,
                                           std::span<const int> labels,
                                           std::span<const double> fpr_levels) {
  TABMIA_ASSIGN_OR_RETURN(ClassCounts counts, CheckInputs(scores, labels));
  TABMIA_ASSIGN_OR_RETURN(RocCurve curve, ComputeRoc(scores, labels));
  MetricReport r;
  r.id = std::move(id);
  TABMIA_ASSIGN_OR_RETURN(r.auc, Auc(scores, labels));
  const double default_level[] = {kDefaultFprLevel};
  if (fpr_levels.empty()) fpr_levels = default_level;
  for (double level : fpr_levels) {
    if (!(level > 0.0 && level < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("FPR level ", level, " outside (0, 1)"));
    }
    r.tpr_at_fpr[FprLevelKey(level)] = TprAtFpr(curve, level);
  }
  r.n_pos = counts.pos;
  r.n_neg = counts.neg;
  return r;
}

std::string RocCsv(const RocCurve& curve) {
  std::string out = "threshold,fpr,tpr\n";
  for (size_t i = 0; i < curve.fpr.size(); ++i) {
    absl::StrAppend(&out, FormatDouble(curve.thresholds[i]), ",",
                    FormatDouble(curve.fpr[i]), ",",
                    FormatDouble(curve.tpr[i]), "\n");
  }
  return out;
}

std::string RocSvg(const std::string& title, const RocCurve& curve) {
  // 400x400 plotting square with a 50px margin; y grows downward in SVG.
  constexpr double kOrigin = 50.0;
  constexpr double kSide = 400.0;
  auto px = [&](double x) { return kOrigin + kSide * x; };
  auto py = [&](double y) { return kOrigin + kSide * (1.0 - y); };
  std::string svg = absl::StrFormat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" "
      "viewBox=\"0 0 500 500\">\n"
      "<rect x=\"0\" y=\"0\" width=\"500\" height=\"500\" fill=\"white\"/>\n"
      "<text x=\"250\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"16\">%s</text>\n"
      "<rect x=\"50\" y=\"50\" width=\"400\" height=\"400\" fill=\"none\" "
      "stroke=\"black\"/>\n"
      "<line x1=\"50\" y1=\"450\" x2=\"450\" y2=\"50\" stroke=\"gray\" "
      "stroke-dasharray=\"4 4\"/>\n",
      title);
  for (int i = 0; i <= 10; ++i) {
    const double v = i / 10.0;
    absl::StrAppendFormat(
        &svg,
        "<text x=\"%.1f\" y=\"468\" text-anchor=\"middle\" font-size=\"10\">"
        "%.1f</text>\n<text x=\"42\" y=\"%.1f\" text-anchor=\"end\" "
        "font-size=\"10\">%.1f</text>\n",
        px(v), v, py(v) + 3.0, v);
  }
  svg +=
      "<text x=\"250\" y=\"490\" text-anchor=\"middle\" font-size=\"12\">"
      "False positive rate</text>\n"
      "<text x=\"14\" y=\"250\" text-anchor=\"middle\" font-size=\"12\" "
      "transform=\"rotate(-90 14 250)\">True positive rate</text>\n"
      "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (size_t i = 0; i < curve.fpr.size(); ++i) {
    absl::StrAppendFormat(&svg, "%s%.2f,%.2f", i == 0 ? "" : " ",
                          px(curve.fpr[i]), py(curve.tpr[i]));
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

absl::Status EmitReport(const std::vector<MetricReport>& reports,
                        const std::map<std::string, RocCurve>& curves,
                        const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create report directory ", out_dir.string()));
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const MetricReport& r : reports) arr.push_back(r.ToJson());
  TABMIA_RETURN_IF_ERROR(
      WriteStringToFile(out_dir / "metrics.json", arr.dump(2) + "\n"));
  for (const MetricReport& r : reports) {
    auto it = curves.find(r.id);
    if (it == curves.end()) continue;
    TABMIA_RETURN_IF_ERROR(WriteStringToFile(
        out_dir / absl::StrCat("roc_", r.id, ".csv"), RocCsv(it->second)));
    TABMIA_RETURN_IF_ERROR(WriteStringToFile(
        out_dir / absl::StrCat("roc_", r.id, ".svg"),
        RocSvg(absl::StrFormat("ROC %s (AUC %.3f)", r.id, r.auc), it->second)));
  }
  return absl::OkStatus();
}

}  // namespace tabmia
