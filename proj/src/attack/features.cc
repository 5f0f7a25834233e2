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

#include "tabmia/attack/features.h"

#include <algorithm>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/binary.h"
#include "tabmia/diffusion/process.h"
#include "tabmia/io.h"
#include "tabmia/random.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

constexpr std::string_view kMagic = "TFMX";
constexpr uint32_t kVersion = 1;

}  // namespace

NoiseSet MakeNoiseSet(size_t n_eps, size_t dim, uint64_t seed) {
  NoiseSet set;
  set.seed = seed;
  set.noises = DenseMatrix(n_eps, dim);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : set.noises.data()) v = normal(rng);
  return set;
}

absl::StatusOr<TimeSet> TimeSet::Create(std::vector<int> timesteps,
                                        int num_steps) {
  if (timesteps.empty()) {
    return absl::InvalidArgumentError("time set is empty");
  }
  std::sort(timesteps.begin(), timesteps.end());
  if (std::adjacent_find(timesteps.begin(), timesteps.end()) !=
      timesteps.end()) {
    return absl::InvalidArgumentError("time set has duplicate timesteps");
  }
  if (timesteps.front() < 0 || timesteps.back() >= num_steps) {
    return absl::OutOfRangeError(absl::StrCat(
        "time set must lie in [0, ", num_steps, ")"));
  }
  TimeSet ts;
  ts.timesteps_ = std::move(timesteps);
  return ts;
}

absl::Status FeatureMatrix::Validate() const {
  if (values.cols() != width()) {
    return absl::InvalidArgumentError(
        absl::StrCat("feature width ", values.cols(), " != n_eps (", n_eps,
                     ") x n_t (", n_t(), ")"));
  }
  if (record_ids.size() != values.rows()) {
    return absl::InvalidArgumentError("one record id per feature row needed");
  }
  if (has_labels() && labels.size() != values.rows()) {
    return absl::InvalidArgumentError("one label per feature row needed");
  }
  if (!values.AllFinite()) {
    return absl::InvalidArgumentError("feature matrix has non-finite values");
  }
  return absl::OkStatus();
}

absl::StatusOr<FeatureMatrix> ExtractFeatures(
    const NoisePredictor& predictor, const DenseMatrix& records,
    std::span<const int64_t> record_ids, const NoiseSet& noise_set,
    const TimeSet& time_set, const NoiseSchedule& schedule) {
  if (record_ids.size() != records.rows()) {
    return absl::InvalidArgumentError("one record id per record needed");
  }
  if (noise_set.noises.cols() != records.cols()) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise width ", noise_set.noises.cols(),
                     " != record width ", records.cols()));
  }
  FeatureMatrix f;
  f.record_ids.assign(record_ids.begin(), record_ids.end());
  f.n_eps = noise_set.size();
  f.timesteps = time_set.timesteps();
  f.noise_seed = noise_set.seed;
  f.values = DenseMatrix(records.rows(), f.width());
  for (size_t j = 0; j < f.n_eps; ++j) {
    for (size_t k = 0; k < f.n_t(); ++k) {
      const int t = f.timesteps[k];
      auto losses = DiffusionLossRows(predictor, records, noise_set.noise(j),
                                      t, schedule);
      if (!losses.ok()) {
        return absl::Status(
            losses.status().code(),
            absl::StrCat("loss for noise ", j, ", t=", t, ": ",
                         losses.status().message()));
      }
      const size_t col = f.column(j, k);
      for (size_t i = 0; i < records.rows(); ++i) {
        f.values(i, col) = (*losses)[i];
      }
    }
  }
  return f;
}

absl::StatusOr<FeatureMatrix> ConcatFeatures(
    std::span<const FeatureMatrix> parts) {
  if (parts.empty()) {
    return absl::InvalidArgumentError("nothing to concatenate");
  }
  FeatureMatrix out;
  out.model_id = parts.size() == 1 ? parts[0].model_id : "pooled";
  out.n_eps = parts[0].n_eps;
  out.timesteps = parts[0].timesteps;
  out.noise_seed = parts[0].noise_seed;
  size_t rows = 0;
  bool labelled = true;
  for (const auto& p : parts) {
    if (p.n_eps != out.n_eps || p.timesteps != out.timesteps ||
        p.noise_seed != out.noise_seed) {
      return absl::InvalidArgumentError(absl::StrCat(
          "feature layout of ", p.model_id, " differs from ",
          parts[0].model_id));
    }
    rows += p.values.rows();
    labelled = labelled && p.has_labels();
  }
  out.values = DenseMatrix(rows, out.width());
  size_t r = 0;
  for (const auto& p : parts) {
    std::copy(p.values.data().begin(), p.values.data().end(),
              out.values.row(r).begin());
    r += p.values.rows();
    out.record_ids.insert(out.record_ids.end(), p.record_ids.begin(),
                          p.record_ids.end());
    if (labelled) {
      out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
    }
  }
  return out;
}

std::string SerializeFeatureBlock(const FeatureMatrix& features) {
  ByteWriter w;
  w.Bytes(kMagic);
  w.U32(kVersion);
  w.U64(features.values.rows());
  w.U64(features.width());
  w.U64(features.n_eps);
  w.U64(features.n_t());
  for (int t : features.timesteps) w.U64(static_cast<uint64_t>(int64_t{t}));
  for (double v : features.values.data()) w.F64(v);
  return w.Take();
}

nlohmann::json FeatureSidecar(const FeatureMatrix& features) {
  return {{"model_id", features.model_id},
          {"noise_seed", features.noise_seed},
          {"record_ids", features.record_ids},
          {"labels", features.labels}};
}

absl::Status WriteFeatureMatrix(const std::filesystem::path& path,
                                const FeatureMatrix& features) {
  TABMIA_RETURN_IF_ERROR(features.Validate());
  TABMIA_RETURN_IF_ERROR(
      WriteStringToFile(path, SerializeFeatureBlock(features)));
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  return WriteStringToFile(sidecar, FeatureSidecar(features).dump(2) + "\n");
}

absl::StatusOr<FeatureMatrix> ReadFeatureMatrix(
    const std::filesystem::path& path) {
  TABMIA_ASSIGN_OR_RETURN(std::string bytes, ReadFileToString(path));
  ByteReader r(bytes);
  TABMIA_RETURN_IF_ERROR(r.Expect(kMagic));
  uint32_t version = 0;
  TABMIA_RETURN_IF_ERROR(r.U32(version));
  if (version != kVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported TFMX version ", version));
  }
  uint64_t rows = 0, width = 0, n_eps = 0, n_t = 0;
  TABMIA_RETURN_IF_ERROR(r.U64(rows));
  TABMIA_RETURN_IF_ERROR(r.U64(width));
  TABMIA_RETURN_IF_ERROR(r.U64(n_eps));
  TABMIA_RETURN_IF_ERROR(r.U64(n_t));
  if (n_t > (uint64_t{1} << 20) || width != n_eps * n_t ||
      r.remaining() != 8 * (n_t + rows * width)) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": inconsistent TFMX header"));
  }
  FeatureMatrix f;
  f.n_eps = n_eps;
  for (uint64_t k = 0; k < n_t; ++k) {
    uint64_t t = 0;
    TABMIA_RETURN_IF_ERROR(r.U64(t));
    f.timesteps.push_back(static_cast<int>(static_cast<int64_t>(t)));
  }
  f.values = DenseMatrix(rows, width);
  for (double& v : f.values.data()) TABMIA_RETURN_IF_ERROR(r.F64(v));

  std::filesystem::path sidecar = path;
  sidecar += ".json";
  TABMIA_ASSIGN_OR_RETURN(std::string meta_text, ReadFileToString(sidecar));
  try {
    nlohmann::json meta = nlohmann::json::parse(meta_text);
    f.model_id = meta.at("model_id").get<std::string>();
    f.noise_seed = meta.at("noise_seed").get<uint64_t>();
    f.record_ids = meta.at("record_ids").get<std::vector<int64_t>>();
    f.labels = meta.value("labels", std::vector<int>{});
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(sidecar.string(), ": ", e.what()));
  }
  TABMIA_RETURN_IF_ERROR(f.Validate());
  return f;
}

}  // namespace tabmia
