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

#include "tabmia/challenge/view.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "tabmia/challenge/artifacts.h"
#include "tabmia/io.h"

namespace tabmia {
namespace {

absl::StatusOr<nlohmann::json> ParseJson(const std::string& text,
                                         const std::string& what) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(what, " is not valid JSON"));
  }
  return j;
}

}  // namespace

AdversaryView::AdversaryView(std::filesystem::path root, Track track)
    : root_(std::move(root)), track_(track) {}

absl::StatusOr<std::vector<ModelSlot>> AdversaryView::Models() const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (models_loaded_) return models_;
  }
  auto text = Read(layout::kModels);
  if (!text.ok()) return text.status();
  auto j = ParseJson(*text, layout::kModels);
  if (!j.ok()) return j.status();
  std::vector<ModelSlot> models;
  try {
    for (const auto& m : *j) {
      auto phase = ParsePhase(m.at("phase").get<std::string>());
      if (!phase.ok()) return phase.status();
      models.push_back({m.at("id").get<std::string>(), *phase});
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed models.json: ", e.what()));
  }
  std::lock_guard<std::mutex> lock(mu_);
  models_ = models;
  models_loaded_ = true;
  return models;
}

bool AdversaryView::Allows(const std::string& path) const {
  if (path == layout::kSchema || path == layout::kEncoder ||
      path == layout::kDiffusion || path == layout::kModels ||
      path == layout::kSpec) {
    return true;
  }
  std::vector<std::string> parts = absl::StrSplit(path, '/');
  if (parts.size() != 3 || parts[0] != "models") return false;
  const std::string& id = parts[1];
  const std::string& file = parts[2];
  // The model list itself is always readable, so this cannot recurse.
  absl::StatusOr<Phase> phase = PhaseOf(id);
  if (!phase.ok()) return false;
  if (file == "challenge.csv") return true;
  if (file == "challenge_labels.csv") return *phase == Phase::kTrain;
  if (track_ == Track::kWhiteBox) {
    return file == "checkpoint.bin" || file == "meta.json";
  }
  return file == "synth.csv";
}

absl::StatusOr<std::string> AdversaryView::Read(const std::string& path) const {
  if (!Allows(path)) {
    std::lock_guard<std::mutex> lock(mu_);
    log_.push_back("denied:" + path);
    return absl::PermissionDeniedError(absl::StrCat(
        "adversary view (", TrackName(track_), ") may not read ", path));
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    log_.push_back(path);
  }
  return ReadFileToString(root_ / path);
}

std::vector<std::string> AdversaryView::AccessLog() const {
  std::lock_guard<std::mutex> lock(mu_);
  return log_;
}

absl::StatusOr<Phase> AdversaryView::PhaseOf(const std::string& id) const {
  auto models = Models();
  if (!models.ok()) return models.status();
  for (const ModelSlot& m : *models) {
    if (m.id == id) return m.phase;
  }
  return absl::NotFoundError(absl::StrCat("unknown model ", id));
}

absl::StatusOr<TableSchema> AdversaryView::Schema() const {
  auto text = Read(layout::kSchema);
  if (!text.ok()) return text.status();
  auto j = ParseJson(*text, layout::kSchema);
  if (!j.ok()) return j.status();
  return TableSchema::FromJson(*j);
}

absl::StatusOr<EncoderStats> AdversaryView::Encoder() const {
  auto text = Read(layout::kEncoder);
  if (!text.ok()) return text.status();
  auto j = ParseJson(*text, layout::kEncoder);
  if (!j.ok()) return j.status();
  return EncoderStats::FromJson(*j);
}

absl::StatusOr<DiffusionSettings> AdversaryView::Diffusion() const {
  auto text = Read(layout::kDiffusion);
  if (!text.ok()) return text.status();
  auto j = ParseJson(*text, layout::kDiffusion);
  if (!j.ok()) return j.status();
  return DiffusionSettingsFromJson(*j);
}

absl::StatusOr<DenoiserParams> AdversaryView::TargetDenoiser(
    const std::string& id) const {
  auto ckpt = Read(layout::Checkpoint(id));
  if (!ckpt.ok()) return ckpt.status();
  auto meta = Read(layout::Meta(id));
  if (!meta.ok()) return meta.status();
  auto params = ParseDenoiser(*ckpt, *meta);
  if (!params.ok()) {
    return absl::Status(params.status().code(),
                        absl::StrCat(id, ": ", params.status().message()));
  }
  return params;
}

absl::StatusOr<CsvTable> AdversaryView::Synthetic(const std::string& id) const {
  auto schema = Schema();
  if (!schema.ok()) return schema.status();
  auto text = Read(layout::Synth(id));
  if (!text.ok()) return text.status();
  auto table = ParseCsv(*schema, *text, /*with_record_id=*/false);
  if (!table.ok()) return table.status();
  if (table->rows.empty()) {
    return absl::FailedPreconditionError(
        absl::StrCat("empty synthetic dump for ", id));
  }
  return table;
}

absl::StatusOr<CsvTable> AdversaryView::Challenge(const std::string& id) const {
  auto schema = Schema();
  if (!schema.ok()) return schema.status();
  auto text = Read(layout::Challenge(id));
  if (!text.ok()) return text.status();
  return ParseCsv(*schema, *text, /*with_record_id=*/true);
}

absl::StatusOr<std::vector<int>> AdversaryView::ChallengeLabels(
    const std::string& id) const {
  auto challenge = Challenge(id);
  if (!challenge.ok()) return challenge.status();
  auto text = Read(layout::ChallengeLabels(id));
  if (!text.ok()) return text.status();
  auto labels = ParseLabelsCsv(*text);
  if (!labels.ok()) return labels.status();
  if (labels->record_ids != challenge->record_ids) {
    return absl::InvalidArgumentError(absl::StrCat(
        "challenge labels of ", id, " do not match its challenge rows"));
  }
  return labels->labels;
}

}  // namespace tabmia
