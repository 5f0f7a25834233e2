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

#ifndef TABMIA_DIFFUSION_DENOISER_H_
#define TABMIA_DIFFUSION_DENOISER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "tabmia/diffusion/schedule.h"
#include "tabmia/numerics/dense_matrix.h"
#include "tabmia/numerics/mlp.h"

namespace tabmia {

// Anything that predicts the noise component of a batch of noisy rows.
// Row i of `noisy` is at timestep timesteps[i].
class NoisePredictor {
 public:
  virtual ~NoisePredictor() = default;
  virtual size_t dim() const = 0;
  virtual absl::StatusOr<DenseMatrix> PredictNoise(
      const DenseMatrix& noisy, std::span<const int> timesteps) const = 0;
};

inline constexpr size_t kDefaultTimeEmbedDim = 16;

// Sinusoidal features of t / num_steps. Half the entries are sines, half
// cosines, at geometrically spaced frequencies; the phase is scaled so a
// 1000-step schedule sees the usual integer-timestep embedding.
void TimeEmbedding(int t, int num_steps, std::span<double> out);

struct DenoiserConfig {
  std::vector<size_t> hidden_sizes = {128, 128};
  size_t embed_dim = kDefaultTimeEmbedDim;
};

// The noise-prediction network: an MLP over [x_t, embed(t)] with a linear
// head of width input_dim.
struct DenoiserParams {
  MlpParams mlp;
  size_t input_dim = 0;
  size_t embed_dim = kDefaultTimeEmbedDim;
  int num_steps = kDefaultTimesteps;

  absl::Status Validate() const;
};

absl::StatusOr<DenoiserParams> InitDenoiser(size_t input_dim, int num_steps,
                                            const DenoiserConfig& config,
                                            uint64_t seed);

// Builds the network input [x_t, embed(t)] for each row.
DenseMatrix DenoiserInputs(const DenoiserParams& params,
                           const DenseMatrix& noisy,
                           std::span<const int> timesteps);

class MlpNoisePredictor final : public NoisePredictor {
 public:
  explicit MlpNoisePredictor(const DenoiserParams& params) : params_(params) {}
  size_t dim() const override { return params_.input_dim; }
  absl::StatusOr<DenseMatrix> PredictNoise(
      const DenseMatrix& noisy, std::span<const int> timesteps) const override;

 private:
  const DenoiserParams& params_;
};

}  // namespace tabmia

#endif  // TABMIA_DIFFUSION_DENOISER_H_
