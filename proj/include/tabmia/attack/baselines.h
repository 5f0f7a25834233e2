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

#ifndef TABMIA_ATTACK_BASELINES_H_
#define TABMIA_ATTACK_BASELINES_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "tabmia/diffusion/ddim.h"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/diffusion/schedule.h"
#include "tabmia/numerics/dense_matrix.h"

namespace tabmia {

// Diffusion loss of one record under a fixed (eps0, t). Lower means more
// likely a member; NaiveMembershipScores negates it so that higher scores
// always mean "member".
absl::StatusOr<double> NaiveLossScore(const NoisePredictor& predictor,
                                      std::span<const double> record,
                                      std::span<const double> eps0, int t,
                                      const NoiseSchedule& schedule);

absl::StatusOr<std::vector<double>> NaiveMembershipScores(
    const NoisePredictor& predictor, const DenseMatrix& records,
    std::span<const double> eps0, int t, const NoiseSchedule& schedule);

// SecMI t-error ||psi(phi(x~_t, t), t) - x~_t||_2 for every record, where
// x~_t = Phi(x0, t) is reached with deterministic forward steps. Requires
// t + stride < T.
absl::StatusOr<std::vector<double>> SecmiTError(const NoisePredictor& predictor,
                                                const DenseMatrix& records,
                                                int t,
                                                const NoiseSchedule& schedule,
                                                const DdimOptions& options = {});

// Negated t-error (lower error => member).
absl::StatusOr<std::vector<double>> SecmiMembershipScores(
    const NoisePredictor& predictor, const DenseMatrix& records, int t,
    const NoiseSchedule& schedule, const DdimOptions& options = {});

struct BestNoiseResult {
  std::vector<double> aucs;  // one per candidate noise
  size_t best_index = 0;
};

// Reference-only: scores labelled records with the naive loss under every
// candidate noise and reports each candidate's AUC. Picking the best needs
// the very labels being predicted, so this is an upper bound, not an attack.
absl::StatusOr<BestNoiseResult> BestNoiseOracle(
    const NoisePredictor& predictor, const DenseMatrix& records,
    std::span<const int> labels, const DenseMatrix& candidate_noises, int t,
    const NoiseSchedule& schedule);

}  // namespace tabmia

#endif  // TABMIA_ATTACK_BASELINES_H_
