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

#ifndef TABMIA_CHALLENGE_ADVERSARY_H_
#define TABMIA_CHALLENGE_ADVERSARY_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "tabmia/attack/classifier.h"
#include "tabmia/attack/features.h"
#include "tabmia/challenge/config.h"
#include "tabmia/challenge/view.h"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/diffusion/schedule.h"
#include "tabmia/tabular/encoder.h"
#include "tabmia/tabular/schema.h"

namespace tabmia {

// Seeds of the adversary-side stages. The noise set and the model split are
// shared by both tracks.
struct AttackSeeds {
  uint64_t noise_set = 0;
  uint64_t model_split = 0;
  uint64_t classifier = 0;
  // Shadow of model `id` trains with DeriveSeed(shadow_master, "shadow/<id>").
  uint64_t shadow_master = 0;
};

AttackSeeds DeriveAttackSeeds(uint64_t master_seed, Track track);
uint64_t ShadowSeed(const AttackSeeds& seeds, const std::string& id);

// Public information every attack step needs, read through the view once.
struct AttackContext {
  TableSchema schema;
  EncoderStats encoder;
  DiffusionSettings diffusion;
  std::optional<NoiseSchedule> schedule;
  std::vector<ModelSlot> models;
  NoiseSet noise_set;
  std::optional<TimeSet> time_set;

  std::vector<std::string> ModelIds(Phase phase) const;
};

absl::StatusOr<AttackContext> LoadAttackContext(const AdversaryView& view,
                                                const AttackSettings& settings,
                                                const AttackSeeds& seeds);

// The denoiser whose losses are probed for model `id`: the target itself in
// the white-box track, a shadow trained on its synthetic dump in the
// black-box track. Shadows are written to <workspace>/shadows/models/<id>/,
// with the target file layout, when the workspace is not empty.
absl::StatusOr<DenoiserParams> AttackPredictor(
    const AdversaryView& view, const AttackContext& ctx, const std::string& id,
    const AttackSeeds& seeds, const std::filesystem::path& workspace);

// Loss features of model `id`'s challenge rows; labelled for train-phase
// models.
absl::StatusOr<FeatureMatrix> ModelFeatures(const AdversaryView& view,
                                            const AttackContext& ctx,
                                            const std::string& id,
                                            const DenoiserParams& predictor);

struct MethodScores {
  std::string method;
  std::vector<ScoreRecord> scores;
};

// Single-loss baselines on model `id`'s challenge rows: naive loss with the
// first noise of the set at every naive timestep ("naive_t<t>") and the SecMI
// t-error ("secmi_t<t>").
absl::StatusOr<std::vector<MethodScores>> BaselineScores(
    const AdversaryView& view, const AttackContext& ctx, const std::string& id,
    const DenoiserParams& predictor, const AttackSettings& settings);

// Trains one classifier on the features of the train-phase models, split by
// model into attack-training and validation sets.
absl::StatusOr<AttackClassifier> TrainTrackClassifier(
    const std::map<std::string, FeatureMatrix>& train_phase_features,
    const AttackSettings& settings, const AttackSeeds& seeds);

struct AttackResult {
  Track track = Track::kWhiteBox;
  AttackClassifier classifier;
  // "mlp" first, then the baselines; scores cover dev and final models.
  std::vector<MethodScores> methods;
};

absl::StatusOr<AttackResult> BuildWhiteboxAttack(
    const AdversaryView& view, const AttackSettings& settings,
    const AttackSeeds& seeds, const std::filesystem::path& workspace,
    int workers);
absl::StatusOr<AttackResult> BuildBlackboxAttack(
    const AdversaryView& view, const AttackSettings& settings,
    const AttackSeeds& seeds, const std::filesystem::path& workspace,
    int workers);

// scores/<track>.csv for the classifier and scores/<track>_<method>.csv for
// each baseline.
absl::Status WriteAttackScores(const std::filesystem::path& out,
                               const AttackResult& result);

}  // namespace tabmia

#endif  // TABMIA_CHALLENGE_ADVERSARY_H_
