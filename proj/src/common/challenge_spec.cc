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

#include "tabmia/challenge_spec.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace tabmia {

const char* PhaseName(Phase p) {
  switch (p) {
    case Phase::kTrain:
      return "train";
    case Phase::kDev:
      return "dev";
    case Phase::kFinal:
      return "final";
  }
  return "?";
}

const char* TrackName(Track t) {
  return t == Track::kWhiteBox ? "white_box" : "black_box";
}

absl::StatusOr<Phase> ParsePhase(const std::string& s) {
  if (s == "train") return Phase::kTrain;
  if (s == "dev") return Phase::kDev;
  if (s == "final") return Phase::kFinal;
  return absl::InvalidArgumentError(absl::StrCat("unknown phase \"", s, "\""));
}

absl::StatusOr<Track> ParseTrack(const std::string& s) {
  if (s == "white_box") return Track::kWhiteBox;
  if (s == "black_box") return Track::kBlackBox;
  return absl::InvalidArgumentError(absl::StrCat("unknown track \"", s, "\""));
}

absl::Status ChallengeSpec::Validate() const {
  if (train_phase < 1 || dev_phase < 1 || final_phase < 1) {
    return absl::InvalidArgumentError("every phase needs at least one model");
  }
  if (members_per_model < 1) {
    return absl::InvalidArgumentError("members_per_model must be >= 1");
  }
  if (challenge_queries_per_model < 2 || challenge_queries_per_model % 2 != 0 ||
      challenge_queries_per_model > 2 * members_per_model) {
    return absl::InvalidArgumentError(absl::StrCat(
        "challenge_queries_per_model must be even, >= 2 and <= 2 * "
        "members_per_model, got ",
        challenge_queries_per_model));
  }
  if (synth_samples_per_model < 0) {
    return absl::InvalidArgumentError("synth_samples_per_model must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<ChallengeSpec> ChallengeSpec::FromJson(const nlohmann::json& j) {
  ChallengeSpec s;
  try {
    s.train_phase = j.value("train_phase", s.train_phase);
    s.dev_phase = j.value("dev_phase", s.dev_phase);
    s.final_phase = j.value("final_phase", s.final_phase);
    s.members_per_model = j.value("members_per_model", s.members_per_model);
    s.challenge_queries_per_model =
        j.value("challenge_queries_per_model", s.challenge_queries_per_model);
    s.synth_samples_per_model =
        j.value("synth_samples_per_model", s.synth_samples_per_model);
    if (j.contains("tracks")) {
      s.tracks.clear();
      for (const auto& t : j.at("tracks")) {
        auto track = ParseTrack(t.get<std::string>());
        if (!track.ok()) return track.status();
        s.tracks.push_back(*track);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed challenge spec: ", e.what()));
  }
  if (absl::Status st = s.Validate(); !st.ok()) return st;
  return s;
}

nlohmann::json ChallengeSpec::ToJson() const {
  nlohmann::json tracks_json = nlohmann::json::array();
  for (Track t : tracks) tracks_json.push_back(TrackName(t));
  return {{"train_phase", train_phase},
          {"dev_phase", dev_phase},
          {"final_phase", final_phase},
          {"members_per_model", members_per_model},
          {"challenge_queries_per_model", challenge_queries_per_model},
          {"synth_samples_per_model", synth_samples_per_model},
          {"tracks", tracks_json}};
}

std::vector<ModelSlot> ModelSlots(const ChallengeSpec& spec) {
  std::vector<ModelSlot> slots;
  auto add = [&](Phase p, int n) {
    for (int i = 0; i < n; ++i) {
      slots.push_back({absl::StrFormat("%s_%02d", PhaseName(p), i), p});
    }
  };
  add(Phase::kTrain, spec.train_phase);
  add(Phase::kDev, spec.dev_phase);
  add(Phase::kFinal, spec.final_phase);
  return slots;
}

}  // namespace tabmia
