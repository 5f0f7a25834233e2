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

#include "tabmia/challenge/artifacts.h"

#include <charconv>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "tabmia/io.h"
#include "tabmia/numerics/checkpoint.h"

namespace tabmia {
namespace layout {

std::string ModelDir(const std::string& id) { return "models/" + id; }
std::string Checkpoint(const std::string& id) {
  return ModelDir(id) + "/checkpoint.bin";
}
std::string Meta(const std::string& id) { return ModelDir(id) + "/meta.json"; }
std::string Synth(const std::string& id) {
  return ModelDir(id) + "/synth.csv";
}
std::string Challenge(const std::string& id) {
  return ModelDir(id) + "/challenge.csv";
}
std::string ChallengeLabels(const std::string& id) {
  return ModelDir(id) + "/challenge_labels.csv";
}
std::string GroundTruth(const std::string& id) {
  return std::string(kGroundTruthDir) + "/" + id + ".csv";
}
std::string SplitManifestPath(const std::string& id) {
  return std::string(kGroundTruthDir) + "/splits/" + id + ".json";
}
std::string Scores(const std::string& track) {
  return "scores/" + track + ".csv";
}
std::string MethodScores(const std::string& track, const std::string& method) {
  return "scores/" + track + "_" + method + ".csv";
}

}  // namespace layout

std::string DenoiserMetaJson(const DenoiserParams& params) {
  nlohmann::json j = {{"format", "TMLP"},
                      {"input_dim", params.input_dim},
                      {"embed_dim", params.embed_dim},
                      {"num_steps", params.num_steps}};
  return j.dump(2) + "\n";
}

absl::StatusOr<DenoiserParams> ParseDenoiser(std::string_view checkpoint,
                                             const std::string& meta_json) {
  DenoiserParams p;
  auto mlp = DeserializeMlp(checkpoint);
  if (!mlp.ok()) return mlp.status();
  p.mlp = *std::move(mlp);
  nlohmann::json j = nlohmann::json::parse(meta_json, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("denoiser meta is not a JSON object");
  }
  try {
    p.input_dim = j.at("input_dim").get<size_t>();
    p.embed_dim = j.at("embed_dim").get<size_t>();
    p.num_steps = j.at("num_steps").get<int>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed denoiser meta: ", e.what()));
  }
  if (absl::Status st = p.Validate(); !st.ok()) return st;
  return p;
}

absl::Status WriteDenoiser(const std::filesystem::path& root,
                           const std::string& id,
                           const DenoiserParams& params) {
  if (absl::Status st = WriteMlpCheckpoint(root / layout::Checkpoint(id),
                                           params.mlp);
      !st.ok()) {
    return st;
  }
  return WriteStringToFile(root / layout::Meta(id), DenoiserMetaJson(params));
}

std::string FormatLabelsCsv(std::span<const int64_t> record_ids,
                            std::span<const int> labels) {
  std::string out = "record_id,is_member\n";
  for (size_t i = 0; i < record_ids.size(); ++i) {
    absl::StrAppend(&out, record_ids[i], ",", labels[i], "\n");
  }
  return out;
}

absl::StatusOr<LabelTable> ParseLabelsCsv(const std::string& text) {
  LabelTable t;
  bool header = true;
  size_t line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != "record_id,is_member") {
        return absl::InvalidArgumentError(
            "label file header must be record_id,is_member");
      }
      header = false;
      continue;
    }
    std::vector<absl::string_view> cells = absl::StrSplit(line, ',');
    int64_t id = 0;
    int label = -1;
    bool ok = cells.size() == 2;
    if (ok) {
      auto r1 = std::from_chars(cells[0].data(),
                                cells[0].data() + cells[0].size(), id);
      auto r2 = std::from_chars(cells[1].data(),
                                cells[1].data() + cells[1].size(), label);
      ok = r1.ec == std::errc() && r1.ptr == cells[0].data() + cells[0].size() &&
           r2.ec == std::errc() && r2.ptr == cells[1].data() + cells[1].size() &&
           (label == 0 || label == 1);
    }
    if (!ok) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad label row at line ", line_no));
    }
    t.record_ids.push_back(id);
    t.labels.push_back(label);
  }
  if (header) return absl::InvalidArgumentError("label file is empty");
  return t;
}

}  // namespace tabmia
