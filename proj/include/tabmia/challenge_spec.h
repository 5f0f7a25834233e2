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

#ifndef TABMIA_CHALLENGE_SPEC_H_
#define TABMIA_CHALLENGE_SPEC_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace tabmia {

enum class Phase { kTrain, kDev, kFinal };
enum class Track { kWhiteBox, kBlackBox };

const char* PhaseName(Phase p);
const char* TrackName(Track t);
absl::StatusOr<Phase> ParsePhase(const std::string& s);
absl::StatusOr<Track> ParseTrack(const std::string& s);

// Shape of a membership-inference challenge: how many target models exist
// per phase and how each one's data is laid out.
struct ChallengeSpec {
  int train_phase = 30;
  int dev_phase = 20;
  int final_phase = 20;
  // Training rows per target model. Each model also owns the same number of
  // holdout rows.
  int members_per_model = 64;
  // Balanced query rows per model (half members, half holdout).
  int challenge_queries_per_model = 128;
  // Rows sampled from each target for the black-box view. 0 means
  // members_per_model.
  int synth_samples_per_model = 0;
  std::vector<Track> tracks = {Track::kWhiteBox, Track::kBlackBox};

  absl::Status Validate() const;
  int num_models() const { return train_phase + dev_phase + final_phase; }
  int synth_samples() const {
    return synth_samples_per_model > 0 ? synth_samples_per_model
                                       : members_per_model;
  }
  // Rows of population the split consumes.
  size_t required_population() const {
    return static_cast<size_t>(num_models()) * 2 * members_per_model;
  }

  static absl::StatusOr<ChallengeSpec> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;

  friend bool operator==(const ChallengeSpec&, const ChallengeSpec&) = default;
};

struct ModelSlot {
  std::string id;
  Phase phase;
};

// Model ids in phase order: train_00.., dev_00.., final_00...
std::vector<ModelSlot> ModelSlots(const ChallengeSpec& spec);

}  // namespace tabmia

#endif  // TABMIA_CHALLENGE_SPEC_H_
