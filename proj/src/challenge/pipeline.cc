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

#include "tabmia/challenge/pipeline.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "tabmia/challenge/adversary.h"
#include "tabmia/challenge/artifacts.h"
#include "tabmia/challenge/fleet.h"
#include "tabmia/challenge/view.h"
#include "tabmia/io.h"
#include "tabmia/log.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

constexpr char kBestNoiseMethod[] = "best_noise_oracle";

}  // namespace

absl::Status RunTrackAttack(const RunConfig& config,
                            const std::filesystem::path& out, Track track) {
  const std::string name = TrackName(track);
  LogInfo(absl::StrCat("running the ", name, " attack"));
  AdversaryView view(out, track);
  const AttackSeeds seeds = DeriveAttackSeeds(config.master_seed, track);
  const std::filesystem::path workspace = out / "attack" / name;
  auto result =
      track == Track::kWhiteBox
          ? BuildWhiteboxAttack(view, config.attack, seeds, workspace,
                                config.workers)
          : BuildBlackboxAttack(view, config.attack, seeds, workspace,
                                config.workers);
  nlohmann::json access = view.AccessLog();
  TABMIA_RETURN_IF_ERROR(WriteStringToFile(
      out / layout::kLogDir / ("access_" + name + ".json"),
      access.dump(2) + "\n"));
  if (!result.ok()) return result.status();
  TABMIA_RETURN_IF_ERROR(WriteAttackScores(out, *result));
  nlohmann::json seed_json = {{"noise_set", seeds.noise_set},
                              {"model_split", seeds.model_split},
                              {"classifier", seeds.classifier}};
  if (track == Track::kBlackBox) {
    for (const ModelSlot& s : ModelSlots(config.challenge)) {
      seed_json["shadow"][s.id] = ShadowSeed(seeds, s.id);
    }
  }
  nlohmann::json selected = result->classifier.selected.ToJson();
  TABMIA_RETURN_IF_ERROR(WriteStringToFile(
      workspace / "selected_hparams.json", selected.dump(2) + "\n"));
  return WriteStageLog(out, "attack/" + name, config, seed_json);
}

std::vector<std::pair<std::string, std::string>> TrackScoreFiles(
    const RunConfig& config, Track track) {
  const std::string name = TrackName(track);
  std::vector<std::pair<std::string, std::string>> files = {
      {"mlp", layout::Scores(name)}};
  for (int t : config.attack.naive_timesteps) {
    const std::string m = absl::StrCat("naive_t", t);
    files.push_back({m, layout::MethodScores(name, m)});
  }
  const std::string secmi = absl::StrCat("secmi_t", config.attack.secmi_t);
  files.push_back({secmi, layout::MethodScores(name, secmi)});
  return files;
}

absl::StatusOr<ExperimentReport> EvaluateExperiment(
    const RunConfig& config, const std::filesystem::path& out) {
  ExperimentReport report;
  std::map<std::string, RocCurve> curves;
  std::vector<std::string> all_ids;
  for (const ModelSlot& s : ModelSlots(config.challenge)) all_ids.push_back(s.id);
  TABMIA_ASSIGN_OR_RETURN(
      auto truth, LoadGroundTruth(out / layout::kGroundTruthDir, all_ids));
  const bool oracle = config.attack.best_noise_candidates > 0;

  auto add = [&](const std::string& track, Phase phase,
                 const std::string& method, const std::string& path,
                 bool curve) -> absl::Status {
    TABMIA_ASSIGN_OR_RETURN(std::string text, ReadFileToString(out / path));
    TABMIA_ASSIGN_OR_RETURN(std::vector<ScoreRecord> scores,
                            ParseScoresCsv(text));
    std::vector<std::string> ids;
    for (const ModelSlot& s : ModelSlots(config.challenge)) {
      if (s.phase == phase) ids.push_back(s.id);
    }
    const std::string id =
        absl::StrCat(track, "_", PhaseName(phase), "_", method);
    TABMIA_ASSIGN_OR_RETURN(
        Evaluation e,
        EvaluateScores(id, scores, truth, ids, config.evaluation.fpr_levels));
    report.reports.push_back(e.report);
    if (curve) curves.emplace(id, std::move(e.curve));
    return absl::OkStatus();
  };

  for (Track track : config.challenge.tracks) {
    const std::string name = TrackName(track);
    for (Phase phase : {Phase::kDev, Phase::kFinal}) {
      for (const auto& [method, path] : TrackScoreFiles(config, track)) {
        // ScoreRecords of one file cover both phases; EvaluateScores keeps
        // only the phase's models.
        TABMIA_RETURN_IF_ERROR(add(name, phase, method, path, method == "mlp"));
      }
      if (track == Track::kWhiteBox && oracle) {
        TABMIA_ASSIGN_OR_RETURN(
            BestNoiseSummary best,
            RunBestNoiseOracle(config, out, phase, config.workers));
        const std::string path = layout::MethodScores(
            name, absl::StrCat(kBestNoiseMethod, "_", PhaseName(phase)));
        TABMIA_RETURN_IF_ERROR(WriteStringToFile(
            out / path, FormatScoresCsv(best.pooled_best_scores)));
        TABMIA_RETURN_IF_ERROR(add(name, phase, kBestNoiseMethod, path, false));
        report.best_noise.push_back(std::move(best));
      }
    }
  }
  TABMIA_RETURN_IF_ERROR(
      EmitReport(report.reports, curves, out / layout::kReportDir));
  nlohmann::json best_json = nlohmann::json::array();
  for (const BestNoiseSummary& b : report.best_noise) {
    best_json.push_back(b.ToJson());
  }
  TABMIA_RETURN_IF_ERROR(
      WriteStringToFile(out / layout::kReportDir / "best_noise.json",
                        best_json.dump(2) + "\n"));
  TABMIA_RETURN_IF_ERROR(WriteStageLog(
      out, "evaluate", config, {{"best_noise", BestNoiseSeed(config)}}));
  return report;
}

absl::StatusOr<ExperimentReport> RunChallenge(
    const RunConfig& config, const std::filesystem::path& out) {
  TABMIA_RETURN_IF_ERROR(config.Validate());
  TABMIA_RETURN_IF_ERROR(PrepareExperiment(config, out));
  TABMIA_RETURN_IF_ERROR(TrainFleet(config, out));
  for (Track track : config.challenge.tracks) {
    TABMIA_RETURN_IF_ERROR(RunTrackAttack(config, out, track));
  }
  return EvaluateExperiment(config, out);
}

}  // namespace tabmia
