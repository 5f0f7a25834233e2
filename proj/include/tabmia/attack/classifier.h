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

#ifndef TABMIA_ATTACK_CLASSIFIER_H_
#define TABMIA_ATTACK_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "tabmia/attack/features.h"
#include "tabmia/numerics/mlp.h"

namespace tabmia {

struct ModelSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
};

// Seeded partition of whole models into classifier-training and validation
// groups, round(n * train_fraction) of them for training (30 -> 20/10).
absl::StatusOr<ModelSplit> ModelBasedSplit(std::span<const std::string> ids,
                                           uint64_t seed,
                                           double train_fraction = 2.0 / 3.0);

struct AttackTrainConfig {
  // Candidate first hidden widths; the second hidden layer is half as wide.
  std::vector<size_t> hidden_widths = {64, 128};
  std::vector<double> learning_rates = {1e-3, 3e-4};
  int epochs = 5000;
  // 0 trains full-batch.
  int batch_size = 0;
  double fpr_level = 0.10;
  uint64_t seed = 0;
};

struct SelectedHparams {
  size_t hidden_width = 0;
  double lr = 0.0;
  int epochs = 0;
  double val_tpr = 0.0;
  double val_auc = 0.0;

  nlohmann::json ToJson() const;
};

// Three weight layers [n_eps * n_t, h, h / 2, 1] with relu hidden layers and a
// sigmoid head, applied to z-scored loss features.
struct AttackClassifier {
  MlpParams mlp;
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  size_t n_eps = 0;
  std::vector<int> timesteps;
  uint64_t noise_seed = 0;
  SelectedHparams selected;
  // Validation metrics of every candidate, in grid order.
  std::vector<SelectedHparams> candidates;

  size_t input_size() const { return mlp.input_size(); }
};

// Fits normalisation on `train` only, trains one classifier per grid point
// with the logistic loss, and keeps the one with the highest validation
// TPR at config.fpr_level (ties: smaller width, then lower learning rate).
absl::StatusOr<AttackClassifier> TrainAttackClassifier(
    const FeatureMatrix& train, const FeatureMatrix& val,
    const AttackTrainConfig& config);

struct ScoreRecord {
  std::string model_id;
  int64_t record_id = 0;
  double score = 0.0;
};

// Membership confidence per row, clipped to [0, 1].
absl::StatusOr<std::vector<double>> ClassifierScores(
    const AttackClassifier& classifier, const FeatureMatrix& features);

absl::StatusOr<std::vector<ScoreRecord>> ScoreRecords(
    const AttackClassifier& classifier, const FeatureMatrix& features);

// `model_id,record_id,score` with six decimals.
std::string FormatScoresCsv(std::span<const ScoreRecord> scores);
absl::StatusOr<std::vector<ScoreRecord>> ParseScoresCsv(
    const std::string& text);

// Writes the MLP as a TMLP checkpoint at `path` and the normalisation and
// selection record to `path` + ".json".
absl::Status WriteAttackClassifier(const std::filesystem::path& path,
                                   const AttackClassifier& classifier);
absl::StatusOr<AttackClassifier> ReadAttackClassifier(
    const std::filesystem::path& path);

}  // namespace tabmia

#endif  // TABMIA_ATTACK_CLASSIFIER_H_
