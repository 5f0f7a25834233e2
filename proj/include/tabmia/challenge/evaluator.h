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

#ifndef TABMIA_CHALLENGE_EVALUATOR_H_
#define TABMIA_CHALLENGE_EVALUATOR_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "tabmia/attack/classifier.h"
#include "tabmia/challenge/artifacts.h"
#include "tabmia/challenge/config.h"
#include "tabmia/evaluation/metrics.h"

namespace tabmia {

// Reads <dir>/<id>.csv for every id.
absl::StatusOr<std::map<std::string, LabelTable>> LoadGroundTruth(
    const std::filesystem::path& dir, const std::vector<std::string>& ids);

struct Evaluation {
  MetricReport report;
  RocCurve curve;
};

// Pools the scores of `model_ids` (every model in `scores`, in first
// appearance order, when empty) against the ground truth. Every ground-truth
// row needs exactly one score and no score may lack a label.
absl::StatusOr<Evaluation> EvaluateScores(
    std::string report_id, std::span<const ScoreRecord> scores,
    const std::map<std::string, LabelTable>& truth,
    std::vector<std::string> model_ids, std::span<const double> fpr_levels);

// Model ids of `scores` in first appearance order.
std::vector<std::string> ScoredModels(std::span<const ScoreRecord> scores);

// Organiser-side reference that picks, with the labels, the single fixed
// noise whose naive-loss score has the highest AUC. It reads target
// checkpoints and ground truth, so it is not an attack.
struct BestNoiseSummary {
  Phase phase = Phase::kDev;
  int t = 0;
  size_t candidates = 0;
  uint64_t seed = 0;
  struct PerModel {
    std::string id;
    double min_auc = 0.0;
    double max_auc = 0.0;
    size_t best_index = 0;
  };
  std::vector<PerModel> per_model;
  size_t pooled_best_index = 0;
  std::vector<double> pooled_aucs;
  std::vector<ScoreRecord> pooled_best_scores;

  nlohmann::json ToJson() const;
};

uint64_t BestNoiseSeed(const RunConfig& config);

absl::StatusOr<BestNoiseSummary> RunBestNoiseOracle(
    const RunConfig& config, const std::filesystem::path& out, Phase phase,
    int workers);

}  // namespace tabmia

#endif  // TABMIA_CHALLENGE_EVALUATOR_H_
