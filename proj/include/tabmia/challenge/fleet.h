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

#ifndef TABMIA_CHALLENGE_FLEET_H_
#define TABMIA_CHALLENGE_FLEET_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "tabmia/challenge/config.h"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/numerics/dense_matrix.h"
#include "tabmia/tabular/encoder.h"
#include "tabmia/tabular/schema.h"
#include "tabmia/tabular/split.h"

namespace tabmia {

// Seeds of the organiser-side stages.
uint64_t PopulationSeed(const RunConfig& config);
uint64_t SplitSeed(const RunConfig& config);
uint64_t TargetSeed(const RunConfig& config, const std::string& id);
uint64_t SynthSeed(const RunConfig& config, const std::string& id);

// Writes logs/<stage>.json with the config hash and the seeds a stage used.
// Slashes in the stage name become underscores in the file name.
absl::Status WriteStageLog(const std::filesystem::path& out,
                           const std::string& stage, const RunConfig& config,
                           const nlohmann::json& seeds);

// Generates the population, fits the encoder, deals the splits and writes the
// public files (spec, schema, encoder, diffusion settings, model list,
// challenge queries, train-phase labels) and the ground truth.
absl::Status PrepareExperiment(const RunConfig& config,
                               const std::filesystem::path& out);

// What the organiser needs to train targets, loaded from a prepared
// experiment directory.
struct FleetData {
  TableSchema schema;
  EncoderStats encoder;
  std::vector<int64_t> record_ids;
  DenseMatrix encoded;  // one row per population record
  std::map<std::string, SplitManifest> splits;
};

absl::StatusOr<FleetData> LoadFleetData(const std::filesystem::path& out);

// Trains the target denoiser of model `id` on its members and writes
// checkpoint.bin and meta.json.
absl::StatusOr<DenoiserParams> TrainTarget(const RunConfig& config,
                                           const FleetData& data,
                                           const std::filesystem::path& out,
                                           const std::string& id);

// Samples `n` rows (0 means the configured dump size) from a stored target
// checkpoint and writes its synth.csv.
absl::Status SynthesizeTarget(const RunConfig& config,
                              const std::filesystem::path& out,
                              const std::string& id, int n = 0);

// TrainTarget and SynthesizeTarget for every model, parallel across models.
absl::Status TrainFleet(const RunConfig& config,
                        const std::filesystem::path& out);

}  // namespace tabmia

#endif  // TABMIA_CHALLENGE_FLEET_H_
