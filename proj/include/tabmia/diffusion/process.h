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

#ifndef TABMIA_DIFFUSION_PROCESS_H_
#define TABMIA_DIFFUSION_PROCESS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/diffusion/schedule.h"
#include "tabmia/numerics/dense_matrix.h"

namespace tabmia {

// sqrt(alpha_bar[t]) * x0 + sqrt(1 - alpha_bar[t]) * eps.
absl::StatusOr<std::vector<double>> ForwardDiffuse(std::span<const double> x0,
                                                   std::span<const double> eps,
                                                   int t,
                                                   const NoiseSchedule& schedule);

// Row-wise forward diffusion of every row of `x0` with the same `eps`.
DenseMatrix ForwardDiffuseRows(const DenseMatrix& x0,
                               std::span<const double> eps, double alpha_bar);

// ||eps_theta(x_t, t) - eps||^2, summed over coordinates.
absl::StatusOr<double> DiffusionLoss(const NoisePredictor& predictor,
                                     std::span<const double> x0,
                                     std::span<const double> eps, int t,
                                     const NoiseSchedule& schedule);

// DiffusionLoss for every row of `x0` with a shared (eps, t). Each entry is
// bit-identical to the corresponding single-row DiffusionLoss call.
absl::StatusOr<std::vector<double>> DiffusionLossRows(
    const NoisePredictor& predictor, const DenseMatrix& x0,
    std::span<const double> eps, int t, const NoiseSchedule& schedule);

struct DenoiserTrainConfig {
  int steps = 5000;
  int batch = 64;
  double lr = 1e-3;
  uint64_t seed = 0;
};

// Minimises the batch-mean diffusion loss with Adam. Each step draws a batch
// of rows with replacement, a uniform timestep and a fresh Gaussian noise per
// row. Deterministic given config.seed; the initial weights come from
// InitDenoiser(d, T, arch, config.seed).
absl::StatusOr<DenoiserParams> TrainDenoiser(const DenseMatrix& data,
                                             const NoiseSchedule& schedule,
                                             const DenoiserConfig& arch,
                                             const DenoiserTrainConfig& config);

// Continues training from `params`; steps == 0 returns them unchanged.
absl::StatusOr<DenoiserParams> ContinueTraining(
    DenoiserParams params, const DenseMatrix& data,
    const NoiseSchedule& schedule, const DenoiserTrainConfig& config);

// Ancestral sampling from t = T-1 down to 0. The posterior mean uses the
// predicted noise; steps with t > 0 add sqrt(posterior variance) * z with
// posterior variance beta[t] (1 - alpha_bar[t-1]) / (1 - alpha_bar[t]).
absl::StatusOr<DenseMatrix> Sample(const NoisePredictor& predictor,
                                   const NoiseSchedule& schedule, size_t n,
                                   uint64_t seed);

}  // namespace tabmia

#endif  // TABMIA_DIFFUSION_PROCESS_H_
