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

#ifndef TABMIA_CHALLENGE_CONFIG_H_
#define TABMIA_CHALLENGE_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "tabmia/attack/classifier.h"
#include "tabmia/challenge_spec.h"
#include "tabmia/diffusion/ddim.h"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/diffusion/process.h"
#include "tabmia/diffusion/schedule.h"
#include "tabmia/tabular/generator.h"

namespace tabmia {

// Settings shared by every target and shadow denoiser of a run.
struct DiffusionSettings {
  int num_steps = kDefaultTimesteps;
  double beta_start = kDefaultBetaStart;
  double beta_end = kDefaultBetaEnd;
  DenoiserConfig arch;
  int train_steps = 2000;
  int batch = 64;
  double lr = 1e-3;
  int ddim_stride = 1;
  BackwardNoise secmi_backward_noise = BackwardNoise::kFresh;

  absl::StatusOr<NoiseSchedule> Schedule() const;
  DenoiserTrainConfig TrainConfig(uint64_t seed) const;

  friend bool operator==(const DiffusionSettings& a,
                         const DiffusionSettings& b) {
    return a.num_steps == b.num_steps && a.beta_start == b.beta_start &&
           a.beta_end == b.beta_end &&
           a.arch.hidden_sizes == b.arch.hidden_sizes &&
           a.arch.embed_dim == b.arch.embed_dim &&
           a.train_steps == b.train_steps && a.batch == b.batch &&
           a.lr == b.lr && a.ddim_stride == b.ddim_stride &&
           a.secmi_backward_noise == b.secmi_backward_noise;
  }
};

struct AttackSettings {
  size_t n_eps = 300;
  std::vector<int> timesteps = DefaultTimeSteps();
  std::vector<size_t> hidden_widths = {64, 128};
  std::vector<double> learning_rates = {1e-3, 3e-4};
  int epochs = 5000;
  int batch_size = 0;
  double train_fraction = 2.0 / 3.0;
  double fpr_level = 0.10;
  // Baselines reported next to the trained classifier.
  int secmi_t = 100;
  std::vector<int> naive_timesteps = {5, 10, 20, 50, 100, 200, 999};
  int best_noise_candidates = 1000;
  int best_noise_t = 20;

  AttackTrainConfig ClassifierConfig(uint64_t seed) const;

  friend bool operator==(const AttackSettings&,
                         const AttackSettings&) = default;
};

struct EvaluationSettings {
  std::vector<double> fpr_levels = {0.10};

  friend bool operator==(const EvaluationSettings&,
                         const EvaluationSettings&) = default;
};

// Everything needed to reproduce a run. Each stochastic stage draws its seed
// as DeriveSeed(master_seed, "<stage>[/<model id>]").
struct RunConfig {
  uint64_t master_seed = 0;
  int workers = 1;
  std::string out_dir;
  ChallengeSpec challenge;
  GeneratorConfig generator;
  DiffusionSettings diffusion;
  AttackSettings attack;
  EvaluationSettings evaluation;

  absl::Status Validate() const;

  static absl::StatusOr<RunConfig> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
  // FNV-1a of the canonical JSON, as 16 hex digits.
  std::string Hash() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path);

// The public part of the diffusion settings (no seeds), shared with the
// adversary so shadow models can match the target configuration.
nlohmann::json DiffusionSettingsJson(const DiffusionSettings& d);
absl::StatusOr<DiffusionSettings> DiffusionSettingsFromJson(
    const nlohmann::json& j);

}  // namespace tabmia

#endif  // TABMIA_CHALLENGE_CONFIG_H_
