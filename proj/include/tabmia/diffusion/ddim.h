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

#ifndef TABMIA_DIFFUSION_DDIM_H_
#define TABMIA_DIFFUSION_DDIM_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/diffusion/schedule.h"
#include "tabmia/numerics/dense_matrix.h"

namespace tabmia {

// Deterministic (eta = 0) DDIM transfer of every row of `x` from noise level
// `from_alpha_bar` to `to_alpha_bar` given a noise estimate per row:
//   x0_hat = (x - sqrt(1 - a_from) eps) / sqrt(a_from)
//   out    = sqrt(a_to) x0_hat + sqrt(1 - a_to) eps
DenseMatrix DdimTransfer(const DenseMatrix& x, const DenseMatrix& eps,
                         double from_alpha_bar, double to_alpha_bar);

// Predicted clean rows (x - sqrt(1 - a) eps) / sqrt(a).
DenseMatrix PredictCleanRows(const DenseMatrix& x, const DenseMatrix& eps,
                             double alpha_bar);

// Which noise estimate the backward step uses.
enum class BackwardNoise {
  // Evaluate eps_theta at the source (noisier) level, as SecMI does.
  kFresh,
  // Reuse the estimate made by the preceding forward step. With this choice
  // the backward step exactly undoes the forward step.
  kCached,
};

struct DdimOptions {
  int stride = 1;
  BackwardNoise backward_noise = BackwardNoise::kFresh;
};

// phi: moves rows at level t to level t + stride using eps_theta(x_t, t).
absl::StatusOr<DenseMatrix> DdimForwardStep(const NoisePredictor& predictor,
                                            const DenseMatrix& x_t, int t,
                                            const NoiseSchedule& schedule,
                                            int stride = 1);

// psi: moves rows at level t + stride back to level t using
// eps_theta(x_{t+stride}, t + stride).
absl::StatusOr<DenseMatrix> DdimBackwardStep(const NoisePredictor& predictor,
                                             const DenseMatrix& x_next, int t,
                                             const NoiseSchedule& schedule,
                                             int stride = 1);

// Phi(x0, t): forward steps at levels 0, stride, ..., t - stride. t must be
// a multiple of the stride; t == 0 returns x0.
absl::StatusOr<DenseMatrix> IteratedForward(const NoisePredictor& predictor,
                                            const DenseMatrix& x0, int t,
                                            const NoiseSchedule& schedule,
                                            int stride = 1);

// Single-row conveniences.
absl::StatusOr<std::vector<double>> DdimForwardStep(
    const NoisePredictor& predictor, std::span<const double> x_t, int t,
    const NoiseSchedule& schedule, int stride = 1);
absl::StatusOr<std::vector<double>> DdimBackwardStep(
    const NoisePredictor& predictor, std::span<const double> x_next, int t,
    const NoiseSchedule& schedule, int stride = 1);

}  // namespace tabmia

#endif  // TABMIA_DIFFUSION_DDIM_H_
