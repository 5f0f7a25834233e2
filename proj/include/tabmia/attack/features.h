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

#ifndef TABMIA_ATTACK_FEATURES_H_
#define TABMIA_ATTACK_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/diffusion/schedule.h"
#include "tabmia/numerics/dense_matrix.h"

namespace tabmia {

// The fixed noises used for every loss evaluation of an experiment, one
// standard-normal draw per row.
struct NoiseSet {
  uint64_t seed = 0;
  DenseMatrix noises;  // n_eps x d

  size_t size() const { return noises.rows(); }
  std::span<const double> noise(size_t j) const { return noises.row(j); }
};

NoiseSet MakeNoiseSet(size_t n_eps, size_t dim, uint64_t seed);

// Sorted, distinct timesteps.
class TimeSet {
 public:
  static absl::StatusOr<TimeSet> Create(std::vector<int> timesteps,
                                        int num_steps);
  const std::vector<int>& timesteps() const { return timesteps_; }
  size_t size() const { return timesteps_.size(); }

 private:
  std::vector<int> timesteps_;
};

inline const std::vector<int>& DefaultTimeSteps() {
  static const std::vector<int> kSteps = {5, 10, 20, 30, 40, 50, 100};
  return kSteps;
}

// Loss features of a batch of records under one model. values(i, j * n_t + k)
// is the diffusion loss of record i under noise j at timesteps[k].
struct FeatureMatrix {
  std::string model_id;
  std::vector<int64_t> record_ids;
  std::vector<int> labels;  // 1 member, 0 holdout; empty when unknown
  size_t n_eps = 0;
  std::vector<int> timesteps;
  uint64_t noise_seed = 0;
  DenseMatrix values;

  size_t n_t() const { return timesteps.size(); }
  size_t width() const { return n_eps * timesteps.size(); }
  size_t column(size_t noise_index, size_t time_index) const {
    return noise_index * timesteps.size() + time_index;
  }
  bool has_labels() const { return !labels.empty(); }

  absl::Status Validate() const;
};

absl::StatusOr<FeatureMatrix> ExtractFeatures(
    const NoisePredictor& predictor, const DenseMatrix& records,
    std::span<const int64_t> record_ids, const NoiseSet& noise_set,
    const TimeSet& time_set, const NoiseSchedule& schedule);

// Stacks matrices with equal layout (same n_eps, timesteps and noise seed).
absl::StatusOr<FeatureMatrix> ConcatFeatures(
    std::span<const FeatureMatrix> parts);

// TFMX binary layout, little-endian:
//   "TFMX" | u32 version | u64 n_rows | u64 width | u64 n_eps | u64 n_t |
//   n_t x i64 timesteps | n_rows * width f64 values, row-major
// Record ids, labels, model id and noise seed go to a JSON sidecar.
std::string SerializeFeatureBlock(const FeatureMatrix& features);
nlohmann::json FeatureSidecar(const FeatureMatrix& features);

// Writes `path` and `path` + ".json".
absl::Status WriteFeatureMatrix(const std::filesystem::path& path,
                                const FeatureMatrix& features);
absl::StatusOr<FeatureMatrix> ReadFeatureMatrix(
    const std::filesystem::path& path);

}  // namespace tabmia

#endif  // TABMIA_ATTACK_FEATURES_H_
