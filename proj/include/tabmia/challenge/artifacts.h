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

#ifndef TABMIA_CHALLENGE_ARTIFACTS_H_
#define TABMIA_CHALLENGE_ARTIFACTS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "tabmia/diffusion/denoiser.h"

namespace tabmia {

// Relative paths inside an experiment directory.
namespace layout {

inline constexpr char kSpec[] = "spec.json";
inline constexpr char kPopulation[] = "population.csv";
inline constexpr char kSchema[] = "schema.json";
inline constexpr char kEncoder[] = "encoder.json";
inline constexpr char kDiffusion[] = "diffusion.json";
inline constexpr char kModels[] = "models.json";
inline constexpr char kGroundTruthDir[] = "ground_truth";
inline constexpr char kReportDir[] = "report";
inline constexpr char kLogDir[] = "logs";

std::string ModelDir(const std::string& id);
std::string Checkpoint(const std::string& id);
std::string Meta(const std::string& id);
std::string Synth(const std::string& id);
std::string Challenge(const std::string& id);
std::string ChallengeLabels(const std::string& id);
std::string GroundTruth(const std::string& id);
std::string SplitManifestPath(const std::string& id);
std::string Scores(const std::string& track);
std::string MethodScores(const std::string& track, const std::string& method);

}  // namespace layout

// A denoiser is stored as a TMLP checkpoint plus a meta.json with the fields
// the MLP does not carry (input_dim, embed_dim, num_steps).
std::string DenoiserMetaJson(const DenoiserParams& params);
absl::StatusOr<DenoiserParams> ParseDenoiser(std::string_view checkpoint,
                                             const std::string& meta_json);
absl::Status WriteDenoiser(const std::filesystem::path& root,
                           const std::string& id, const DenoiserParams& params);

// record_id,is_member
std::string FormatLabelsCsv(std::span<const int64_t> record_ids,
                            std::span<const int> labels);
struct LabelTable {
  std::vector<int64_t> record_ids;
  std::vector<int> labels;
};
absl::StatusOr<LabelTable> ParseLabelsCsv(const std::string& text);

}  // namespace tabmia

#endif  // TABMIA_CHALLENGE_ARTIFACTS_H_
