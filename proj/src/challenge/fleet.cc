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

#include "tabmia/challenge/fleet.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"
#include "tabmia/challenge/artifacts.h"
#include "tabmia/diffusion/process.h"
#include "tabmia/io.h"
#include "tabmia/log.h"
#include "tabmia/parallel.h"
#include "tabmia/random.h"
#include "tabmia/status_macros.h"
#include "tabmia/tabular/generator.h"

namespace tabmia {
namespace {

absl::Status WriteJson(const std::filesystem::path& path,
                       const nlohmann::json& j) {
  return WriteStringToFile(path, j.dump(2) + "\n");
}

absl::StatusOr<nlohmann::json> ReadJson(const std::filesystem::path& path) {
  TABMIA_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), " is not valid JSON"));
  }
  return j;
}

absl::Status WithModel(const std::string& id, const absl::Status& st) {
  if (st.ok()) return st;
  return absl::Status(st.code(), absl::StrCat("model ", id, ": ", st.message()));
}

// Rows of `table` whose record ids are in `ids`, in sorted id order.
CsvTable SelectRows(const CsvTable& table,
                    const std::map<int64_t, size_t>& index,
                    std::vector<int64_t> ids) {
  std::sort(ids.begin(), ids.end());
  CsvTable out;
  for (int64_t id : ids) {
    out.record_ids.push_back(id);
    out.rows.push_back(table.rows[index.at(id)]);
  }
  return out;
}

}  // namespace

uint64_t PopulationSeed(const RunConfig& config) {
  return DeriveSeed(config.master_seed, "population");
}
uint64_t SplitSeed(const RunConfig& config) {
  return DeriveSeed(config.master_seed, "splits");
}
uint64_t TargetSeed(const RunConfig& config, const std::string& id) {
  return DeriveSeed(config.master_seed, "target/" + id);
}
uint64_t SynthSeed(const RunConfig& config, const std::string& id) {
  return DeriveSeed(config.master_seed, "synth/" + id);
}

absl::Status WriteStageLog(const std::filesystem::path& out,
                           const std::string& stage, const RunConfig& config,
                           const nlohmann::json& seeds) {
  nlohmann::json j = {{"stage", stage},
                      {"config_hash", config.Hash()},
                      {"master_seed", config.master_seed},
                      {"seeds", seeds}};
  const std::string name = absl::StrReplaceAll(stage, {{"/", "_"}});
  return WriteJson(out / layout::kLogDir / (name + ".json"), j);
}

absl::Status PrepareExperiment(const RunConfig& config,
                               const std::filesystem::path& out) {
  TABMIA_RETURN_IF_ERROR(config.Validate());
  GeneratorConfig gen = config.generator;
  if (gen.rows == 0) gen.rows = config.challenge.required_population();
  const TableSchema& schema = gen.schema;

  LogInfo(absl::StrCat("generating ", gen.rows, " population rows"));
  TABMIA_ASSIGN_OR_RETURN(GeneratedRows generated,
                          GenerateSyntheticPopulation(gen, PopulationSeed(config)));
  CsvTable population;
  population.rows = std::move(generated.rows);
  population.record_ids.resize(population.rows.size());
  std::iota(population.record_ids.begin(), population.record_ids.end(), 0);
  std::map<int64_t, size_t> index;
  for (size_t i = 0; i < population.record_ids.size(); ++i) {
    index[population.record_ids[i]] = i;
  }
  TABMIA_RETURN_IF_ERROR(WriteStringToFile(
      out / layout::kPopulation, FormatCsv(schema, population, true)));
  TABMIA_RETURN_IF_ERROR(WriteJson(out / layout::kSchema, schema.ToJson()));
  TABMIA_RETURN_IF_ERROR(
      WriteJson(out / layout::kSpec, config.challenge.ToJson()));
  TABMIA_RETURN_IF_ERROR(WriteJson(out / layout::kDiffusion,
                                   DiffusionSettingsJson(config.diffusion)));
  TABMIA_RETURN_IF_ERROR(WriteJson(
      out / layout::kGroundTruthDir / "run_config.json", config.ToJson()));

  TABMIA_ASSIGN_OR_RETURN(EncoderStats encoder,
                          FitEncoder(schema, population.rows));
  TABMIA_RETURN_IF_ERROR(WriteJson(out / layout::kEncoder, encoder.ToJson()));

  TABMIA_ASSIGN_OR_RETURN(
      std::vector<SplitManifest> splits,
      MakeSplits(population.rows.size(), config.challenge, SplitSeed(config)));
  nlohmann::json models = nlohmann::json::array();
  for (const SplitManifest& s : splits) {
    models.push_back({{"id", s.model_id}, {"phase", PhaseName(s.phase)}});
    TABMIA_RETURN_IF_ERROR(
        WriteJson(out / layout::SplitManifestPath(s.model_id), s.ToJson()));

    std::vector<int64_t> ids = s.challenge_members;
    ids.insert(ids.end(), s.challenge_holdout.begin(),
               s.challenge_holdout.end());
    CsvTable challenge = SelectRows(population, index, ids);
    std::vector<int> labels;
    for (int64_t id : challenge.record_ids) {
      labels.push_back(std::binary_search(s.challenge_members.begin(),
                                          s.challenge_members.end(), id)
                           ? 1
                           : 0);
    }
    const std::string label_csv =
        FormatLabelsCsv(challenge.record_ids, labels);
    TABMIA_RETURN_IF_ERROR(WriteStringToFile(
        out / layout::Challenge(s.model_id), FormatCsv(schema, challenge, true)));
    TABMIA_RETURN_IF_ERROR(
        WriteStringToFile(out / layout::GroundTruth(s.model_id), label_csv));
    if (s.phase == Phase::kTrain) {
      TABMIA_RETURN_IF_ERROR(WriteStringToFile(
          out / layout::ChallengeLabels(s.model_id), label_csv));
    }
  }
  TABMIA_RETURN_IF_ERROR(WriteJson(out / layout::kModels, models));
  TABMIA_RETURN_IF_ERROR(WriteStageLog(
      out, "population", config, {{"population", PopulationSeed(config)}}));
  return WriteStageLog(out, "splits", config, {{"splits", SplitSeed(config)}});
}

absl::StatusOr<FleetData> LoadFleetData(const std::filesystem::path& out) {
  FleetData data;
  TABMIA_ASSIGN_OR_RETURN(nlohmann::json schema_json,
                          ReadJson(out / layout::kSchema));
  TABMIA_ASSIGN_OR_RETURN(data.schema, TableSchema::FromJson(schema_json));
  TABMIA_ASSIGN_OR_RETURN(nlohmann::json encoder_json,
                          ReadJson(out / layout::kEncoder));
  TABMIA_ASSIGN_OR_RETURN(data.encoder, EncoderStats::FromJson(encoder_json));
  TABMIA_ASSIGN_OR_RETURN(std::string text,
                          ReadFileToString(out / layout::kPopulation));
  TABMIA_ASSIGN_OR_RETURN(CsvTable population,
                          ParseCsv(data.schema, text, true));
  TABMIA_ASSIGN_OR_RETURN(
      data.encoded, EncodeRows(data.schema, data.encoder, population.rows));
  data.record_ids = std::move(population.record_ids);
  TABMIA_ASSIGN_OR_RETURN(nlohmann::json models,
                          ReadJson(out / layout::kModels));
  try {
    for (const auto& m : models) {
      const std::string id = m.at("id").get<std::string>();
      TABMIA_ASSIGN_OR_RETURN(nlohmann::json sj,
                              ReadJson(out / layout::SplitManifestPath(id)));
      TABMIA_ASSIGN_OR_RETURN(SplitManifest split, SplitManifest::FromJson(sj));
      data.splits.emplace(id, std::move(split));
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed models.json: ", e.what()));
  }
  return data;
}

absl::StatusOr<DenoiserParams> TrainTarget(const RunConfig& config,
                                           const FleetData& data,
                                           const std::filesystem::path& out,
                                           const std::string& id) {
  auto it = data.splits.find(id);
  if (it == data.splits.end()) {
    return absl::NotFoundError(absl::StrCat("unknown model ", id));
  }
  std::map<int64_t, size_t> index;
  for (size_t i = 0; i < data.record_ids.size(); ++i) {
    index[data.record_ids[i]] = i;
  }
  const std::vector<int64_t>& members = it->second.members;
  DenseMatrix train(members.size(), data.encoded.cols());
  for (size_t r = 0; r < members.size(); ++r) {
    auto row = index.find(members[r]);
    if (row == index.end()) {
      return absl::NotFoundError(absl::StrCat(
          "model ", id, ": member ", members[r], " not in the population"));
    }
    std::span<const double> src = data.encoded.row(row->second);
    std::copy(src.begin(), src.end(), train.row(r).begin());
  }
  TABMIA_ASSIGN_OR_RETURN(NoiseSchedule schedule, config.diffusion.Schedule());
  LogInfo(absl::StrCat("training target ", id, " for ",
                       config.diffusion.train_steps, " steps"));
  auto params = TrainDenoiser(train, schedule, config.diffusion.arch,
                              config.diffusion.TrainConfig(TargetSeed(config, id)));
  if (!params.ok()) return WithModel(id, params.status());
  TABMIA_RETURN_IF_ERROR(WithModel(id, WriteDenoiser(out, id, *params)));
  return params;
}

absl::Status SynthesizeTarget(const RunConfig& config,
                              const std::filesystem::path& out,
                              const std::string& id, int n) {
  if (n < 0) return absl::InvalidArgumentError("sample count must be >= 0");
  const size_t count = n > 0 ? n : config.challenge.synth_samples();
  TABMIA_ASSIGN_OR_RETURN(std::string ckpt,
                          ReadFileToString(out / layout::Checkpoint(id)));
  TABMIA_ASSIGN_OR_RETURN(std::string meta,
                          ReadFileToString(out / layout::Meta(id)));
  auto params = ParseDenoiser(ckpt, meta);
  if (!params.ok()) return WithModel(id, params.status());
  TABMIA_ASSIGN_OR_RETURN(nlohmann::json schema_json,
                          ReadJson(out / layout::kSchema));
  TABMIA_ASSIGN_OR_RETURN(TableSchema schema,
                          TableSchema::FromJson(schema_json));
  TABMIA_ASSIGN_OR_RETURN(nlohmann::json encoder_json,
                          ReadJson(out / layout::kEncoder));
  TABMIA_ASSIGN_OR_RETURN(EncoderStats encoder,
                          EncoderStats::FromJson(encoder_json));
  TABMIA_ASSIGN_OR_RETURN(NoiseSchedule schedule, config.diffusion.Schedule());
  MlpNoisePredictor predictor(*params);
  auto samples = Sample(predictor, schedule, count, SynthSeed(config, id));
  if (!samples.ok()) return WithModel(id, samples.status());
  auto rows = DecodeRows(schema, encoder, *samples);
  if (!rows.ok()) return WithModel(id, rows.status());
  CsvTable table;
  table.rows = *std::move(rows);
  table.record_ids.resize(table.rows.size());
  std::iota(table.record_ids.begin(), table.record_ids.end(), 0);
  return WriteStringToFile(out / layout::Synth(id),
                           FormatCsv(schema, table, false));
}

absl::Status TrainFleet(const RunConfig& config,
                        const std::filesystem::path& out) {
  TABMIA_ASSIGN_OR_RETURN(FleetData data, LoadFleetData(out));
  const std::vector<ModelSlot> slots = ModelSlots(config.challenge);
  TABMIA_RETURN_IF_ERROR(
      ParallelFor(slots.size(), config.workers, [&](size_t i) -> absl::Status {
        const std::string& id = slots[i].id;
        TABMIA_RETURN_IF_ERROR(TrainTarget(config, data, out, id).status());
        return SynthesizeTarget(config, out, id);
      }));
  nlohmann::json target_seeds, synth_seeds;
  for (const ModelSlot& s : slots) {
    target_seeds[s.id] = TargetSeed(config, s.id);
    synth_seeds[s.id] = SynthSeed(config, s.id);
  }
  TABMIA_RETURN_IF_ERROR(WriteStageLog(out, "targets", config, target_seeds));
  return WriteStageLog(out, "synth", config, synth_seeds);
}

}  // namespace tabmia
