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

#include "tabmia/challenge/evaluator.h"

#include <algorithm>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/attack/baselines.h"
#include "tabmia/attack/features.h"
#include "tabmia/io.h"
#include "tabmia/parallel.h"
#include "tabmia/random.h"
#include "tabmia/status_macros.h"
#include "tabmia/tabular/encoder.h"
#include "tabmia/tabular/schema.h"

namespace tabmia {
namespace {

absl::StatusOr<nlohmann::json> ReadJson(const std::filesystem::path& path) {
  TABMIA_ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), " is not valid JSON"));
  }
  return j;
}

}  // namespace

absl::StatusOr<std::map<std::string, LabelTable>> LoadGroundTruth(
    const std::filesystem::path& dir, const std::vector<std::string>& ids) {
  std::map<std::string, LabelTable> out;
  for (const std::string& id : ids) {
    TABMIA_ASSIGN_OR_RETURN(std::string text,
                            ReadFileToString(dir / (id + ".csv")));
    auto table = ParseLabelsCsv(text);
    if (!table.ok()) {
      return absl::Status(table.status().code(),
                          absl::StrCat("ground truth of ", id, ": ",
                                       table.status().message()));
    }
    out.emplace(id, *std::move(table));
  }
  return out;
}

std::vector<std::string> ScoredModels(std::span<const ScoreRecord> scores) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const ScoreRecord& r : scores) {
    if (seen.insert(r.model_id).second) ids.push_back(r.model_id);
  }
  return ids;
}

absl::StatusOr<Evaluation> EvaluateScores(
    std::string report_id, std::span<const ScoreRecord> scores,
    const std::map<std::string, LabelTable>& truth,
    std::vector<std::string> model_ids, std::span<const double> fpr_levels) {
  if (model_ids.empty()) model_ids = ScoredModels(scores);
  const std::set<std::string> wanted(model_ids.begin(), model_ids.end());
  std::map<std::pair<std::string, int64_t>, double> by_key;
  for (const ScoreRecord& r : scores) {
    if (!wanted.count(r.model_id)) continue;
    if (!by_key.emplace(std::make_pair(r.model_id, r.record_id), r.score)
             .second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "duplicate score for ", r.model_id, " record ", r.record_id));
    }
  }
  std::vector<double> pooled;
  std::vector<int> labels;
  for (const std::string& id : model_ids) {
    auto t = truth.find(id);
    if (t == truth.end()) {
      return absl::NotFoundError(absl::StrCat("no ground truth for ", id));
    }
    for (size_t i = 0; i < t->second.record_ids.size(); ++i) {
      auto s = by_key.find({id, t->second.record_ids[i]});
      if (s == by_key.end()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "no score for ", id, " record ", t->second.record_ids[i]));
      }
      pooled.push_back(s->second);
      labels.push_back(t->second.labels[i]);
      by_key.erase(s);
    }
  }
  if (!by_key.empty()) {
    const auto& [key, v] = *by_key.begin();
    return absl::InvalidArgumentError(absl::StrCat(
        "score for ", key.first, " record ", key.second,
        " has no ground-truth label"));
  }
  Evaluation e;
  TABMIA_ASSIGN_OR_RETURN(
      e.report, ComputeReport(std::move(report_id), pooled, labels, fpr_levels));
  TABMIA_ASSIGN_OR_RETURN(e.curve, ComputeRoc(pooled, labels));
  return e;
}

nlohmann::json BestNoiseSummary::ToJson() const {
  nlohmann::json models = nlohmann::json::array();
  for (const PerModel& m : per_model) {
    models.push_back({{"id", m.id},
                      {"min_auc", m.min_auc},
                      {"max_auc", m.max_auc},
                      {"spread", m.max_auc - m.min_auc},
                      {"best_index", m.best_index}});
  }
  return {{"phase", PhaseName(phase)},
          {"t", t},
          {"candidates", candidates},
          {"noise_seed", seed},
          {"per_model", models},
          {"pooled_best_index", pooled_best_index},
          {"pooled_best_auc",
           pooled_aucs.empty() ? 0.5 : pooled_aucs[pooled_best_index]}};
}

uint64_t BestNoiseSeed(const RunConfig& config) {
  return DeriveSeed(config.master_seed, "best_noise");
}

absl::StatusOr<BestNoiseSummary> RunBestNoiseOracle(
    const RunConfig& config, const std::filesystem::path& out, Phase phase,
    int workers) {
  const AttackSettings& a = config.attack;
  if (a.best_noise_candidates < 1) {
    return absl::FailedPreconditionError("best-noise oracle has no candidates");
  }
  TABMIA_ASSIGN_OR_RETURN(nlohmann::json schema_json,
                          ReadJson(out / layout::kSchema));
  TABMIA_ASSIGN_OR_RETURN(TableSchema schema,
                          TableSchema::FromJson(schema_json));
  TABMIA_ASSIGN_OR_RETURN(nlohmann::json encoder_json,
                          ReadJson(out / layout::kEncoder));
  TABMIA_ASSIGN_OR_RETURN(EncoderStats encoder,
                          EncoderStats::FromJson(encoder_json));
  TABMIA_ASSIGN_OR_RETURN(NoiseSchedule schedule, config.diffusion.Schedule());

  std::vector<std::string> ids;
  for (const ModelSlot& s : ModelSlots(config.challenge)) {
    if (s.phase == phase) ids.push_back(s.id);
  }
  TABMIA_ASSIGN_OR_RETURN(auto truth,
                          LoadGroundTruth(out / layout::kGroundTruthDir, ids));

  BestNoiseSummary summary;
  summary.phase = phase;
  summary.t = a.best_noise_t;
  summary.candidates = a.best_noise_candidates;
  summary.seed = BestNoiseSeed(config);
  const NoiseSet candidates =
      MakeNoiseSet(summary.candidates, schema.encoded_dim(), summary.seed);

  // scores[m][k][i]: naive score of row i of model m under candidate k.
  std::vector<std::vector<std::vector<double>>> scores(ids.size());
  std::vector<CsvTable> tables(ids.size());
  summary.per_model.resize(ids.size());
  TABMIA_RETURN_IF_ERROR(
      ParallelFor(ids.size(), workers, [&](size_t m) -> absl::Status {
        const std::string& id = ids[m];
        TABMIA_ASSIGN_OR_RETURN(std::string ckpt,
                                ReadFileToString(out / layout::Checkpoint(id)));
        TABMIA_ASSIGN_OR_RETURN(std::string meta,
                                ReadFileToString(out / layout::Meta(id)));
        TABMIA_ASSIGN_OR_RETURN(DenoiserParams params,
                                ParseDenoiser(ckpt, meta));
        TABMIA_ASSIGN_OR_RETURN(std::string text,
                                ReadFileToString(out / layout::Challenge(id)));
        TABMIA_ASSIGN_OR_RETURN(tables[m], ParseCsv(schema, text, true));
        if (tables[m].record_ids != truth.at(id).record_ids) {
          return absl::InvalidArgumentError(absl::StrCat(
              "ground truth of ", id, " does not match its challenge rows"));
        }
        TABMIA_ASSIGN_OR_RETURN(DenseMatrix records,
                                EncodeRows(schema, encoder, tables[m].rows));
        MlpNoisePredictor pred(params);
        TABMIA_ASSIGN_OR_RETURN(
            BestNoiseResult best,
            BestNoiseOracle(pred, records, truth.at(id).labels,
                            candidates.noises, summary.t, schedule));
        auto [lo, hi] = std::minmax_element(best.aucs.begin(), best.aucs.end());
        summary.per_model[m] = {id, *lo, *hi, best.best_index};
        scores[m].resize(summary.candidates);
        for (size_t k = 0; k < summary.candidates; ++k) {
          TABMIA_ASSIGN_OR_RETURN(
              scores[m][k],
              NaiveMembershipScores(pred, records, candidates.noise(k),
                                    summary.t, schedule));
        }
        return absl::OkStatus();
      }));

  std::vector<int> labels;
  for (const std::string& id : ids) {
    const auto& l = truth.at(id).labels;
    labels.insert(labels.end(), l.begin(), l.end());
  }
  for (size_t k = 0; k < summary.candidates; ++k) {
    std::vector<double> pooled;
    for (size_t m = 0; m < ids.size(); ++m) {
      pooled.insert(pooled.end(), scores[m][k].begin(), scores[m][k].end());
    }
    TABMIA_ASSIGN_OR_RETURN(double auc, Auc(pooled, labels));
    summary.pooled_aucs.push_back(auc);
    if (auc > summary.pooled_aucs[summary.pooled_best_index]) {
      summary.pooled_best_index = k;
    }
  }
  for (size_t m = 0; m < ids.size(); ++m) {
    const auto& s = scores[m][summary.pooled_best_index];
    for (size_t i = 0; i < s.size(); ++i) {
      summary.pooled_best_scores.push_back(
          {ids[m], tables[m].record_ids[i], s[i]});
    }
  }
  return summary;
}

}  // namespace tabmia
