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

#ifndef TABMIA_CHALLENGE_PIPELINE_H_
#define TABMIA_CHALLENGE_PIPELINE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "tabmia/challenge/config.h"
#include "tabmia/challenge/evaluator.h"
#include "tabmia/evaluation/metrics.h"

namespace tabmia {

// Runs one track's attack through an AdversaryView of `out`, writes its
// scores, keeps shadows, features and the classifier under attack/<track>/
// and records every file the attack read in logs/access_<track>.json.
absl::Status RunTrackAttack(const RunConfig& config,
                            const std::filesystem::path& out, Track track);

// Score files of a track, as (method, relative path), classifier first.
std::vector<std::pair<std::string, std::string>> TrackScoreFiles(
    const RunConfig& config, Track track);

struct ExperimentReport {
  std::vector<MetricReport> reports;
  std::vector<BestNoiseSummary> best_noise;
};

// Pools every score file per phase (dev, final) into reports with ids
// <track>_<phase>_<method>, adds the best-noise reference for the white-box
// track, and writes report/metrics.json, report/best_noise.json and ROC
// files for the classifier reports.
absl::StatusOr<ExperimentReport> EvaluateExperiment(
    const RunConfig& config, const std::filesystem::path& out);

// Every stage end to end into `out`.
absl::StatusOr<ExperimentReport> RunChallenge(const RunConfig& config,
                                              const std::filesystem::path& out);

}  // namespace tabmia

#endif  // TABMIA_CHALLENGE_PIPELINE_H_
