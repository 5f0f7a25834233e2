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

#ifndef TABMIA_CHALLENGE_VIEW_H_
#define TABMIA_CHALLENGE_VIEW_H_

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "tabmia/challenge/config.h"
#include "tabmia/challenge_spec.h"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/tabular/encoder.h"
#include "tabmia/tabular/schema.h"

namespace tabmia {

// The files an adversary may read from an experiment directory. Every read
// goes through Read(), which enforces the allowlist for the track and records
// the path (denied attempts are recorded with a "denied:" prefix).
//
// Both tracks see schema.json, encoder.json, diffusion.json, models.json,
// spec.json, each model's challenge.csv and the challenge_labels.csv of
// train-phase models. The white-box track adds checkpoint.bin and meta.json;
// the black-box track adds synth.csv. Nothing else is readable.
class AdversaryView {
 public:
  AdversaryView(std::filesystem::path root, Track track);

  Track track() const { return track_; }
  const std::filesystem::path& root() const { return root_; }

  // The model list (read through the view on first use).
  absl::StatusOr<std::vector<ModelSlot>> Models() const;

  bool Allows(const std::string& relative_path) const;
  absl::StatusOr<std::string> Read(const std::string& relative_path) const;
  std::vector<std::string> AccessLog() const;

  absl::StatusOr<TableSchema> Schema() const;
  absl::StatusOr<EncoderStats> Encoder() const;
  absl::StatusOr<DiffusionSettings> Diffusion() const;
  absl::StatusOr<DenoiserParams> TargetDenoiser(const std::string& id) const;
  absl::StatusOr<CsvTable> Synthetic(const std::string& id) const;
  absl::StatusOr<CsvTable> Challenge(const std::string& id) const;
  // Labels of a train-phase model's challenge rows, in Challenge(id) order.
  absl::StatusOr<std::vector<int>> ChallengeLabels(const std::string& id) const;

 private:
  absl::StatusOr<Phase> PhaseOf(const std::string& id) const;

  std::filesystem::path root_;
  Track track_;
  mutable std::mutex mu_;
  mutable std::vector<std::string> log_;
  mutable std::vector<ModelSlot> models_;
  mutable bool models_loaded_ = false;
};

}  // namespace tabmia

#endif  // TABMIA_CHALLENGE_VIEW_H_
