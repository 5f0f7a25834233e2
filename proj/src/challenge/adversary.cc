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

#include "tabmia/challenge/adversary.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/attack/baselines.h"
#include "tabmia/challenge/artifacts.h"
#include "tabmia/diffusion/process.h"
#include "tabmia/io.h"
#include "tabmia/log.h"
#include "tabmia/parallel.h"
#include "tabmia/random.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

absl::Status WithModel(const std::string& id, const absl::Status& st) {
  if (st.ok()) return st;
  return absl::Status(st.code(), absl::StrCat("model ", id, ": ", st.message()));
}

absl::StatusOr<CsvTable> EncodedChallenge(const AdversaryView& view,
                                          const AttackContext& ctx,
                                          const std::string& id,
                                          DenseMatrix* encoded) {
  TABMIA_ASSIGN_OR_RETURN(CsvTable table, view.Challenge(id));
  TABMIA_ASSIGN_OR_RETURN(*encoded,
                          EncodeRows(ctx.schema, ctx.encoder, table.rows));
  return table;
}

std::vector<ScoreRecord> ToRecords(const std::string& id,
                                   const std::vector<int64_t>& record_ids,
                                   const std::vector<double>& scores) {
  std::vector<ScoreRecord> out;
  out.reserve(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    out.push_back({id, record_ids[i], scores[i]});
  }
  return out;
}

absl::StatusOr<AttackResult> BuildAttack(const AdversaryView& view,
                                         const AttackSettings& settings,
                                         const AttackSeeds& seeds,
                                         const std::filesystem::path& workspace,
                                         int workers) {
  TABMIA_ASSIGN_OR_RETURN(AttackContext ctx,
                          LoadAttackContext(view, settings, seeds));
  const size_t n = ctx.models.size();
  std::vector<FeatureMatrix> features(n);
  std::vector<std::vector<MethodScores>> baselines(n);
  TABMIA_RETURN_IF_ERROR(ParallelFor(n, workers, [&](size_t i) -> absl::Status {
    const ModelSlot& slot = ctx.models[i];
    TABMIA_ASSIGN_OR_RETURN(
        DenoiserParams predictor,
        AttackPredictor(view, ctx, slot.id, seeds, workspace));
    TABMIA_ASSIGN_OR_RETURN(features[i],
                            ModelFeatures(view, ctx, slot.id, predictor));
    if (!workspace.empty()) {
      TABMIA_RETURN_IF_ERROR(WriteFeatureMatrix(
          workspace / "features" / (slot.id + ".tfmx"), features[i]));
    }
    if (slot.phase != Phase::kTrain) {
      TABMIA_ASSIGN_OR_RETURN(
          baselines[i],
          BaselineScores(view, ctx, slot.id, predictor, settings));
    }
    return absl::OkStatus();
  }));

  std::map<std::string, FeatureMatrix> train_features;
  for (size_t i = 0; i < n; ++i) {
    if (ctx.models[i].phase == Phase::kTrain) {
      train_features.emplace(ctx.models[i].id, features[i]);
    }
  }
  AttackResult result;
  result.track = view.track();
  TABMIA_ASSIGN_OR_RETURN(
      result.classifier,
      TrainTrackClassifier(train_features, settings, seeds));
  if (!workspace.empty()) {
    TABMIA_RETURN_IF_ERROR(
        WriteAttackClassifier(workspace / "classifier.tmlp", result.classifier));
  }

  MethodScores mlp{"mlp", {}};
  for (size_t i = 0; i < n; ++i) {
    if (ctx.models[i].phase == Phase::kTrain) continue;
    TABMIA_ASSIGN_OR_RETURN(std::vector<ScoreRecord> scores,
                            ScoreRecords(result.classifier, features[i]));
    mlp.scores.insert(mlp.scores.end(), scores.begin(), scores.end());
  }
  result.methods.push_back(std::move(mlp));
  for (size_t i = 0; i < n; ++i) {
    for (MethodScores& m : baselines[i]) {
      auto it = std::find_if(
          result.methods.begin(), result.methods.end(),
          [&](const MethodScores& r) { return r.method == m.method; });
      if (it == result.methods.end()) {
        result.methods.push_back(std::move(m));
      } else {
        it->scores.insert(it->scores.end(), m.scores.begin(), m.scores.end());
      }
    }
  }
  return result;
}

}  // namespace

AttackSeeds DeriveAttackSeeds(uint64_t master_seed, Track track) {
  AttackSeeds s;
  s.noise_set = DeriveSeed(master_seed, "noise_set");
  s.model_split = DeriveSeed(master_seed, "model_split");
  s.classifier = DeriveSeed(master_seed, absl::StrCat("attack/", TrackName(track)));
  s.shadow_master = master_seed;
  return s;
}

uint64_t ShadowSeed(const AttackSeeds& seeds, const std::string& id) {
  return DeriveSeed(seeds.shadow_master, "shadow/" + id);
}

std::vector<std::string> AttackContext::ModelIds(Phase phase) const {
  std::vector<std::string> ids;
  for (const ModelSlot& m : models) {
    if (m.phase == phase) ids.push_back(m.id);
  }
  return ids;
}

absl::StatusOr<AttackContext> LoadAttackContext(const AdversaryView& view,
                                                const AttackSettings& settings,
                                                const AttackSeeds& seeds) {
  AttackContext ctx;
  TABMIA_ASSIGN_OR_RETURN(ctx.schema, view.Schema());
  TABMIA_ASSIGN_OR_RETURN(ctx.encoder, view.Encoder());
  TABMIA_ASSIGN_OR_RETURN(ctx.diffusion, view.Diffusion());
  TABMIA_ASSIGN_OR_RETURN(NoiseSchedule schedule, ctx.diffusion.Schedule());
  ctx.schedule.emplace(std::move(schedule));
  TABMIA_ASSIGN_OR_RETURN(ctx.models, view.Models());
  ctx.noise_set =
      MakeNoiseSet(settings.n_eps, ctx.schema.encoded_dim(), seeds.noise_set);
  TABMIA_ASSIGN_OR_RETURN(
      TimeSet times,
      TimeSet::Create(settings.timesteps, ctx.diffusion.num_steps));
  ctx.time_set.emplace(std::move(times));
  return ctx;
}

absl::StatusOr<DenoiserParams> AttackPredictor(
    const AdversaryView& view, const AttackContext& ctx, const std::string& id,
    const AttackSeeds& seeds, const std::filesystem::path& workspace) {
  if (view.track() == Track::kWhiteBox) return view.TargetDenoiser(id);
  TABMIA_ASSIGN_OR_RETURN(CsvTable synth, view.Synthetic(id));
  TABMIA_ASSIGN_OR_RETURN(DenseMatrix data,
                          EncodeRows(ctx.schema, ctx.encoder, synth.rows));
  LogInfo(absl::StrCat("training shadow of ", id, " on ", data.rows(),
                       " synthetic rows"));
  auto shadow = TrainDenoiser(data, *ctx.schedule, ctx.diffusion.arch,
                              ctx.diffusion.TrainConfig(ShadowSeed(seeds, id)));
  if (!shadow.ok()) return WithModel(id, shadow.status());
  if (!workspace.empty()) {
    TABMIA_RETURN_IF_ERROR(WithModel(
        id, WriteDenoiser(workspace / "shadows", id, *shadow)));
  }
  return shadow;
}

absl::StatusOr<FeatureMatrix> ModelFeatures(const AdversaryView& view,
                                            const AttackContext& ctx,
                                            const std::string& id,
                                            const DenoiserParams& predictor) {
  DenseMatrix records;
  TABMIA_ASSIGN_OR_RETURN(CsvTable table,
                          EncodedChallenge(view, ctx, id, &records));
  MlpNoisePredictor pred(predictor);
  auto features = ExtractFeatures(pred, records, table.record_ids,
                                  ctx.noise_set, *ctx.time_set, *ctx.schedule);
  if (!features.ok()) return WithModel(id, features.status());
  features->model_id = id;
  auto phase = std::find_if(ctx.models.begin(), ctx.models.end(),
                            [&](const ModelSlot& m) { return m.id == id; });
  if (phase != ctx.models.end() && phase->phase == Phase::kTrain) {
    TABMIA_ASSIGN_OR_RETURN(features->labels, view.ChallengeLabels(id));
  }
  return features;
}

absl::StatusOr<std::vector<MethodScores>> BaselineScores(
    const AdversaryView& view, const AttackContext& ctx, const std::string& id,
    const DenoiserParams& predictor, const AttackSettings& settings) {
  DenseMatrix records;
  TABMIA_ASSIGN_OR_RETURN(CsvTable table,
                          EncodedChallenge(view, ctx, id, &records));
  MlpNoisePredictor pred(predictor);
  std::vector<MethodScores> out;
  for (int t : settings.naive_timesteps) {
    auto scores = NaiveMembershipScores(pred, records, ctx.noise_set.noise(0),
                                        t, *ctx.schedule);
    if (!scores.ok()) return WithModel(id, scores.status());
    out.push_back({absl::StrCat("naive_t", t),
                   ToRecords(id, table.record_ids, *scores)});
  }
  DdimOptions options;
  options.stride = ctx.diffusion.ddim_stride;
  options.backward_noise = ctx.diffusion.secmi_backward_noise;
  auto secmi = SecmiMembershipScores(pred, records, settings.secmi_t,
                                     *ctx.schedule, options);
  if (!secmi.ok()) return WithModel(id, secmi.status());
  out.push_back({absl::StrCat("secmi_t", settings.secmi_t),
                 ToRecords(id, table.record_ids, *secmi)});
  return out;
}

absl::StatusOr<AttackClassifier> TrainTrackClassifier(
    const std::map<std::string, FeatureMatrix>& train_phase_features,
    const AttackSettings& settings, const AttackSeeds& seeds) {
  std::vector<std::string> ids;
  for (const auto& [id, f] : train_phase_features) {
    if (!f.has_labels()) {
      return absl::FailedPreconditionError(
          absl::StrCat("features of ", id, " carry no labels"));
    }
    ids.push_back(id);
  }
  TABMIA_ASSIGN_OR_RETURN(
      ModelSplit split,
      ModelBasedSplit(ids, seeds.model_split, settings.train_fraction));
  auto gather = [&](const std::vector<std::string>& part) {
    std::vector<FeatureMatrix> parts;
    for (const std::string& id : part) {
      parts.push_back(train_phase_features.at(id));
    }
    return ConcatFeatures(parts);
  };
  TABMIA_ASSIGN_OR_RETURN(FeatureMatrix train, gather(split.train));
  TABMIA_ASSIGN_OR_RETURN(FeatureMatrix val, gather(split.val));
  LogInfo(absl::StrCat("training attack classifier on ", train.values.rows(),
                       " rows, validating on ", val.values.rows()));
  return TrainAttackClassifier(train, val,
                               settings.ClassifierConfig(seeds.classifier));
}

absl::StatusOr<AttackResult> BuildWhiteboxAttack(
    const AdversaryView& view, const AttackSettings& settings,
    const AttackSeeds& seeds, const std::filesystem::path& workspace,
    int workers) {
  if (view.track() != Track::kWhiteBox) {
    return absl::FailedPreconditionError("white-box attack needs a white-box view");
  }
  return BuildAttack(view, settings, seeds, workspace, workers);
}

absl::StatusOr<AttackResult> BuildBlackboxAttack(
    const AdversaryView& view, const AttackSettings& settings,
    const AttackSeeds& seeds, const std::filesystem::path& workspace,
    int workers) {
  if (view.track() != Track::kBlackBox) {
    return absl::FailedPreconditionError("black-box attack needs a black-box view");
  }
  return BuildAttack(view, settings, seeds, workspace, workers);
}

absl::Status WriteAttackScores(const std::filesystem::path& out,
                               const AttackResult& result) {
  const std::string track = TrackName(result.track);
  for (const MethodScores& m : result.methods) {
    const std::string path = m.method == "mlp"
                                 ? layout::Scores(track)
                                 : layout::MethodScores(track, m.method);
    TABMIA_RETURN_IF_ERROR(
        WriteStringToFile(out / path, FormatScoresCsv(m.scores)));
  }
  return absl::OkStatus();
}

}  // namespace tabmia
