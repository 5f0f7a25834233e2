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

#ifndef TABMIA_TABULAR_SPLIT_H_
#define TABMIA_TABULAR_SPLIT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "tabmia/challenge_spec.h"

namespace tabmia {

// Which population rows a target model trained on (members) and which it did
// not (holdout). Both lists are sorted, disjoint and equally long.
struct SplitManifest {
  std::string model_id;
  Phase phase = Phase::kTrain;
  std::vector<int64_t> members;
  std::vector<int64_t> holdout;
  // Balanced query subset; sorted by record id.
  std::vector<int64_t> challenge_members;
  std::vector<int64_t> challenge_holdout;

  absl::Status Validate() const;

  // {"model_id":..,"members":[..],"holdout":[..]} plus the phase and
  // challenge lists.
  nlohmann::json ToJson() const;
  static absl::StatusOr<SplitManifest> FromJson(const nlohmann::json& j);
};

// Deals disjoint member and holdout blocks of `spec.members_per_model` rows to
// every model in ModelSlots(spec) order from a seeded shuffle of the
// population. No row is used by two models, so rows of one model's queries
// never appear in another model's data.
absl::StatusOr<std::vector<SplitManifest>> MakeSplits(size_t population_size,
                                                      const ChallengeSpec& spec,
                                                      uint64_t seed);

}  // namespace tabmia

#endif  // TABMIA_TABULAR_SPLIT_H_
