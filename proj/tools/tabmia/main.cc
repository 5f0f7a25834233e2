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

// tabmia: command-line entry points for the membership-inference challenge.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "tabmia/attack/classifier.h"
#include "tabmia/attack/features.h"
#include "tabmia/challenge/adversary.h"
#include "tabmia/challenge/artifacts.h"
#include "tabmia/challenge/config.h"
#include "tabmia/challenge/evaluator.h"
#include "tabmia/challenge/fleet.h"
#include "tabmia/challenge/pipeline.h"
#include "tabmia/challenge/view.h"
#include "tabmia/io.h"
#include "tabmia/log.h"
#include "tabmia/parallel.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMissingFile = 3;
constexpr int kExitData = 4;
constexpr int kExitIo = 5;
constexpr int kExitInternal = 6;

constexpr char kExitCodeHelp[] = R"(Exit codes:
  0  success
  1  usage error (bad flags or subcommand)
  2  config file missing, malformed or invalid
  3  a required input file does not exist
  4  input data violates its schema or format
  5  an output could not be written
  6  internal error
On failure a JSON object {"error": {...}} is printed to stderr.

Precedence: command-line flags override config values, which override
built-in defaults. TABMIA_LOG=error|warn|info|debug sets log verbosity.)";

// A failure with the exit code it maps to.
struct Failure {
  int exit_code;
  absl::Status status;
};

int ExitCodeFor(const absl::Status& st) {
  switch (st.code()) {
    case absl::StatusCode::kNotFound:
      return kExitMissingFile;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kDataLoss:
      return kExitData;
    case absl::StatusCode::kPermissionDenied:
      return kExitIo;
    default:
      return kExitInternal;
  }
}

int Report(const std::string& subcommand, const Failure& f) {
  nlohmann::json j = {
      {"error",
       {{"subcommand", subcommand},
        {"exit_code", f.exit_code},
        {"status", absl::StatusCodeToString(f.status.code())},
        {"message", std::string(f.status.message())}}}};
  std::cerr << j.dump() << std::endl;
  return f.exit_code;
}

struct Flags {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::string out;
  std::string model;
  std::string track = "white_box";
  int n = 0;
  std::string scores;
  std::string ground_truth;
  std::string report_id = "pooled";
};

// Loads the config and applies flag overrides.
absl::StatusOr<RunConfig> EffectiveConfig(const Flags& flags) {
  TABMIA_ASSIGN_OR_RETURN(RunConfig config, LoadRunConfig(flags.config));
  if (flags.seed) config.master_seed = *flags.seed;
  if (flags.workers) config.workers = *flags.workers;
  if (!flags.out.empty()) config.out_dir = flags.out;
  if (config.out_dir.empty()) {
    return absl::InvalidArgumentError("no output directory (--out or out_dir)");
  }
  TABMIA_RETURN_IF_ERROR(config.Validate());
  return config;
}

std::vector<std::string> SelectModels(const RunConfig& config,
                                      const std::string& model) {
  std::vector<std::string> ids;
  for (const ModelSlot& s : ModelSlots(config.challenge)) {
    if (model.empty() || s.id == model) ids.push_back(s.id);
  }
  return ids;
}

absl::Status CheckModel(const std::vector<std::string>& ids,
                        const std::string& model) {
  if (ids.empty()) {
    return absl::InvalidArgumentError(absl::StrCat("unknown model ", model));
  }
  return absl::OkStatus();
}

absl::Status TrainTargets(const RunConfig& config, const Flags& flags) {
  const std::filesystem::path out = config.out_dir;
  const std::vector<std::string> ids = SelectModels(config, flags.model);
  TABMIA_RETURN_IF_ERROR(CheckModel(ids, flags.model));
  TABMIA_ASSIGN_OR_RETURN(FleetData data, LoadFleetData(out));
  TABMIA_RETURN_IF_ERROR(
      ParallelFor(ids.size(), config.workers, [&](size_t i) {
        return TrainTarget(config, data, out, ids[i]).status();
      }));
  nlohmann::json seeds;
  for (const std::string& id : ids) seeds[id] = TargetSeed(config, id);
  return WriteStageLog(
      out, flags.model.empty() ? "targets" : "target/" + flags.model, config,
      seeds);
}

absl::Status Synthesize(const RunConfig& config, const Flags& flags) {
  const std::filesystem::path out = config.out_dir;
  const std::vector<std::string> ids = SelectModels(config, flags.model);
  TABMIA_RETURN_IF_ERROR(CheckModel(ids, flags.model));
  TABMIA_RETURN_IF_ERROR(
      ParallelFor(ids.size(), config.workers, [&](size_t i) {
        return SynthesizeTarget(config, out, ids[i], flags.n);
      }));
  nlohmann::json seeds;
  for (const std::string& id : ids) seeds[id] = SynthSeed(config, id);
  return WriteStageLog(
      out, flags.model.empty() ? "synth" : "synth/" + flags.model, config,
      seeds);
}

std::filesystem::path Workspace(const RunConfig& config, Track track) {
  return std::filesystem::path(config.out_dir) / "attack" / TrackName(track);
}

std::filesystem::path FeaturePath(const RunConfig& config, Track track,
                                  const std::string& id) {
  return Workspace(config, track) / "features" / (id + ".tfmx");
}

absl::Status ExtractFeatureFiles(const RunConfig& config, const Flags& flags) {
  TABMIA_ASSIGN_OR_RETURN(Track track, ParseTrack(flags.track));
  const std::vector<std::string> ids = SelectModels(config, flags.model);
  TABMIA_RETURN_IF_ERROR(CheckModel(ids, flags.model));
  AdversaryView view(config.out_dir, track);
  const AttackSeeds seeds = DeriveAttackSeeds(config.master_seed, track);
  TABMIA_ASSIGN_OR_RETURN(AttackContext ctx,
                          LoadAttackContext(view, config.attack, seeds));
  return ParallelFor(ids.size(), config.workers, [&](size_t i) -> absl::Status {
    TABMIA_ASSIGN_OR_RETURN(
        DenoiserParams predictor,
        AttackPredictor(view, ctx, ids[i], seeds, Workspace(config, track)));
    TABMIA_ASSIGN_OR_RETURN(FeatureMatrix f,
                            ModelFeatures(view, ctx, ids[i], predictor));
    return WriteFeatureMatrix(FeaturePath(config, track, ids[i]), f);
  });
}

absl::Status TrainAttack(const RunConfig& config, const Flags& flags) {
  TABMIA_ASSIGN_OR_RETURN(Track track, ParseTrack(flags.track));
  std::map<std::string, FeatureMatrix> features;
  for (const ModelSlot& s : ModelSlots(config.challenge)) {
    if (s.phase != Phase::kTrain) continue;
    TABMIA_ASSIGN_OR_RETURN(FeatureMatrix f,
                            ReadFeatureMatrix(FeaturePath(config, track, s.id)));
    features.emplace(s.id, std::move(f));
  }
  const AttackSeeds seeds = DeriveAttackSeeds(config.master_seed, track);
  TABMIA_ASSIGN_OR_RETURN(AttackClassifier classifier,
                          TrainTrackClassifier(features, config.attack, seeds));
  TABMIA_RETURN_IF_ERROR(WriteAttackClassifier(
      Workspace(config, track) / "classifier.tmlp", classifier));
  return WriteStageLog(config.out_dir,
                       absl::StrCat("train_attack/", TrackName(track)), config,
                       {{"model_split", seeds.model_split},
                        {"classifier", seeds.classifier}});
}

absl::Status Infer(const RunConfig& config, const Flags& flags) {
  TABMIA_ASSIGN_OR_RETURN(Track track, ParseTrack(flags.track));
  TABMIA_ASSIGN_OR_RETURN(
      AttackClassifier classifier,
      ReadAttackClassifier(Workspace(config, track) / "classifier.tmlp"));
  std::vector<ScoreRecord> all;
  for (const ModelSlot& s : ModelSlots(config.challenge)) {
    if (s.phase == Phase::kTrain) continue;
    TABMIA_ASSIGN_OR_RETURN(FeatureMatrix f,
                            ReadFeatureMatrix(FeaturePath(config, track, s.id)));
    TABMIA_ASSIGN_OR_RETURN(std::vector<ScoreRecord> scores,
                            ScoreRecords(classifier, f));
    all.insert(all.end(), scores.begin(), scores.end());
  }
  return WriteStringToFile(
      std::filesystem::path(config.out_dir) / layout::Scores(TrackName(track)),
      FormatScoresCsv(all));
}

// Standalone evaluation of one scores file against a ground-truth directory.
absl::Status EvaluateFile(const Flags& flags) {
  TABMIA_ASSIGN_OR_RETURN(std::string text, ReadFileToString(flags.scores));
  TABMIA_ASSIGN_OR_RETURN(std::vector<ScoreRecord> scores,
                          ParseScoresCsv(text));
  const std::vector<std::string> ids = ScoredModels(scores);
  TABMIA_ASSIGN_OR_RETURN(auto truth, LoadGroundTruth(flags.ground_truth, ids));
  const std::vector<double> levels = {kDefaultFprLevel};
  TABMIA_ASSIGN_OR_RETURN(
      Evaluation e, EvaluateScores(flags.report_id, scores, truth, ids, levels));
  std::map<std::string, RocCurve> curves;
  curves.emplace(e.report.id, std::move(e.curve));
  return EmitReport({e.report}, curves, flags.out);
}

}  // namespace
}  // namespace tabmia

int main(int argc, char** argv) {
  using namespace tabmia;
  CLI::App app{"Membership-inference challenge toolkit for tabular diffusion "
               "models."};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);
  Flags flags;

  // The subcommand body; config errors are reported separately from the
  // rest so each failure class gets its own exit code.
  std::string name;
  std::function<absl::Status(const RunConfig&)> body;
  bool needs_config = true;

  auto common = [&](CLI::App* sub, bool with_model) {
    sub->add_option("--config", flags.config, "Run config (JSON)")
        ->required();
    sub->add_option("--seed", flags.seed, "Override the master seed");
    sub->add_option("--workers", flags.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "Experiment directory");
    if (with_model) {
      sub->add_option("--model", flags.model,
                      "Model id (default: every model)");
    }
  };
  auto track_flag = [&](CLI::App* sub) {
    sub->add_option("--track", flags.track, "white_box or black_box")
        ->check(CLI::IsMember({"white_box", "black_box"}));
  };

  CLI::App* gen = app.add_subcommand(
      "gen-data", "Generate the population, splits and challenge files");
  common(gen, false);
  gen->callback([&] {
    name = "gen-data";
    body = [&](const RunConfig& c) {
      return PrepareExperiment(c, c.out_dir);
    };
  });

  CLI::App* train = app.add_subcommand(
      "train-target", "Train target denoisers on their member rows");
  common(train, true);
  train->callback([&] {
    name = "train-target";
    body = [&](const RunConfig& c) { return TrainTargets(c, flags); };
  });

  CLI::App* synth = app.add_subcommand(
      "synth", "Sample synthetic rows from stored target checkpoints");
  common(synth, true);
  synth->add_option("--n", flags.n, "Rows per model (default: config)")
      ->check(CLI::NonNegativeNumber);
  synth->callback([&] {
    name = "synth";
    body = [&](const RunConfig& c) { return Synthesize(c, flags); };
  });

  CLI::App* extract = app.add_subcommand(
      "extract-features",
      "Compute loss features of challenge rows through the adversary view");
  common(extract, true);
  track_flag(extract);
  extract->callback([&] {
    name = "extract-features";
    body = [&](const RunConfig& c) { return ExtractFeatureFiles(c, flags); };
  });

  CLI::App* fit = app.add_subcommand(
      "train-attack", "Train the attack classifier on train-phase features");
  common(fit, false);
  track_flag(fit);
  fit->callback([&] {
    name = "train-attack";
    body = [&](const RunConfig& c) { return TrainAttack(c, flags); };
  });

  CLI::App* infer = app.add_subcommand(
      "infer", "Score dev and final challenge rows with the classifier");
  common(infer, false);
  track_flag(infer);
  infer->callback([&] {
    name = "infer";
    body = [&](const RunConfig& c) { return Infer(c, flags); };
  });

  CLI::App* evaluate = app.add_subcommand(
      "evaluate",
      "Compute metrics. With --scores and --ground-truth, evaluates one "
      "scores file into --out; otherwise evaluates the whole experiment.");
  evaluate->add_option("--config", flags.config, "Run config (JSON)");
  evaluate->add_option("--seed", flags.seed, "Override the master seed");
  evaluate->add_option("--workers", flags.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--out", flags.out, "Experiment or report directory");
  evaluate->add_option("--scores", flags.scores, "Scores CSV");
  evaluate->add_option("--ground-truth", flags.ground_truth,
                       "Directory of <model_id>.csv label files");
  evaluate->add_option("--id", flags.report_id, "Report id");
  evaluate->callback([&] {
    name = "evaluate";
    if (!flags.scores.empty()) {
      needs_config = false;
      body = [&](const RunConfig&) { return EvaluateFile(flags); };
    } else {
      body = [&](const RunConfig& c) {
        return EvaluateExperiment(c, c.out_dir).status();
      };
    }
  });

  CLI::App* run = app.add_subcommand(
      "run-challenge", "Run every stage end to end");
  common(run, false);
  run->callback([&] {
    name = "run-challenge";
    body = [&](const RunConfig& c) {
      return RunChallenge(c, c.out_dir).status();
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (!needs_config) {
    if (flags.ground_truth.empty() || flags.out.empty()) {
      return Report(name, {kExitUsage, absl::InvalidArgumentError(
                                           "--scores needs --ground-truth "
                                           "and --out")});
    }
    absl::Status st = body(RunConfig{});
    if (!st.ok()) return Report(name, {ExitCodeFor(st), st});
    return kExitOk;
  }
  if (flags.config.empty()) {
    return Report(name, {kExitConfig,
                         absl::InvalidArgumentError("--config is required")});
  }
  absl::StatusOr<RunConfig> config = EffectiveConfig(flags);
  if (!config.ok()) return Report(name, {kExitConfig, config.status()});
  LogInfo(absl::StrCat(name, ": config hash ", config->Hash(), ", seed ",
                       config->master_seed));
  absl::Status st = body(*config);
  if (!st.ok()) return Report(name, {ExitCodeFor(st), st});
  return kExitOk;
}
