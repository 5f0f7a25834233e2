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

#include "tabmia/attack/baselines.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/diffusion/process.h"
#include "tabmia/evaluation/metrics.h"
#include "tabmia/status_macros.h"

namespace tabmia {

absl::StatusOr<double> NaiveLossScore(const NoisePredictor& predictor,
                                      std::span<const double> record,
                                      std::span<const double> eps0, int t,
                                      const NoiseSchedule& schedule) {
  return DiffusionLoss(predictor, record, eps0, t, schedule);
}

absl::StatusOr<std::vector<double>> NaiveMembershipScores(
    const NoisePredictor& predictor, const DenseMatrix& records,
    std::span<const double> eps0, int t, const NoiseSchedule& schedule) {
  TABMIA_ASSIGN_OR_RETURN(std::vector<double> losses,
                          DiffusionLossRows(predictor, records, eps0, t,
                                            schedule));
  for (double& v : losses) v = -v;
  return losses;
}

absl::StatusOr<std::vector<double>> SecmiTError(const NoisePredictor& predictor,
                                                const DenseMatrix& records,
                                                int t,
                                                const NoiseSchedule& schedule,
                                                const DdimOptions& options) {
  const int stride = options.stride;
  if (stride < 1 || t < 0 || t + stride >= schedule.num_steps()) {
    return absl::OutOfRangeError(absl::StrCat(
        "SecMI needs 0 <= t and t + stride < ", schedule.num_steps(),
        ", got t=", t, " stride=", stride));
  }
  TABMIA_ASSIGN_OR_RETURN(DenseMatrix x_t,
                          IteratedForward(predictor, records, t, schedule,
                                          stride));
  std::vector<int> ts(records.rows(), t);
  TABMIA_ASSIGN_OR_RETURN(DenseMatrix eps_t, predictor.PredictNoise(x_t, ts));
  const double ab_t = schedule.alpha_bar(t);
  const double ab_next = schedule.alpha_bar(t + stride);
  DenseMatrix x_next = DdimTransfer(x_t, eps_t, ab_t, ab_next);
  DenseMatrix back;
  if (options.backward_noise == BackwardNoise::kCached) {
    back = DdimTransfer(x_next, eps_t, ab_next, ab_t);
  } else {
    TABMIA_ASSIGN_OR_RETURN(
        back, DdimBackwardStep(predictor, x_next, t, schedule, stride));
  }
  std::vector<double> errors(records.rows());
  for (size_t i = 0; i < records.rows(); ++i) {
    auto a = back.row(i);
    auto b = x_t.row(i);
    double acc = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
      const double d = a[k] - b[k];
      acc += d * d;
    }
    if (!std::isfinite(acc)) {
      return absl::InternalError(
          absl::StrCat("non-finite SecMI error for record ", i));
    }
    errors[i] = std::sqrt(acc);
  }
  return errors;
}

absl::StatusOr<std::vector<double>> SecmiMembershipScores(
    const NoisePredictor& predictor, const DenseMatrix& records, int t,
    const NoiseSchedule& schedule, const DdimOptions& options) {
  TABMIA_ASSIGN_OR_RETURN(std::vector<double> errors,
                          SecmiTError(predictor, records, t, schedule, options));
  for (double& v : errors) v = -v;
  return errors;
}

absl::StatusOr<BestNoiseResult> BestNoiseOracle(
    const NoisePredictor& predictor, const DenseMatrix& records,
    std::span<const int> labels, const DenseMatrix& candidate_noises, int t,
    const NoiseSchedule& schedule) {
  if (labels.size() != records.rows()) {
    return absl::InvalidArgumentError(
        "the best-noise oracle needs a label for every record");
  }
  if (candidate_noises.rows() == 0) {
    return absl::InvalidArgumentError("no candidate noises");
  }
  BestNoiseResult result;
  result.aucs.reserve(candidate_noises.rows());
  for (size_t j = 0; j < candidate_noises.rows(); ++j) {
    TABMIA_ASSIGN_OR_RETURN(
        std::vector<double> scores,
        NaiveMembershipScores(predictor, records, candidate_noises.row(j), t,
                              schedule));
    TABMIA_ASSIGN_OR_RETURN(double auc, Auc(scores, labels));
    result.aucs.push_back(auc);
    if (auc > result.aucs[result.best_index]) result.best_index = j;
  }
  return result;
}

}  // namespace tabmia
