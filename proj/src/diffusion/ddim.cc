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

#include "tabmia/diffusion/ddim.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

absl::Status CheckPair(int t, int stride, const NoiseSchedule& schedule) {
  if (stride < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("DDIM stride must be >= 1, got ", stride));
  }
  if (t < 0 || t + stride >= schedule.num_steps()) {
    return absl::OutOfRangeError(
        absl::StrCat("DDIM step between levels ", t, " and ", t + stride,
                     " leaves [0, ", schedule.num_steps(), ")"));
  }
  return absl::OkStatus();
}

DenseMatrix RowMatrix(std::span<const double> x) {
  DenseMatrix m(1, x.size());
  std::copy(x.begin(), x.end(), m.row(0).begin());
  return m;
}

}  // namespace

DenseMatrix PredictCleanRows(const DenseMatrix& x, const DenseMatrix& eps,
                             double alpha_bar) {
  const double s = std::sqrt(1.0 - alpha_bar);
  const double inv_a = 1.0 / std::sqrt(alpha_bar);
  DenseMatrix out(x.rows(), x.cols());
  for (size_t k = 0; k < x.size(); ++k) {
    out.data()[k] = (x.data()[k] - s * eps.data()[k]) * inv_a;
  }
  return out;
}

DenseMatrix DdimTransfer(const DenseMatrix& x, const DenseMatrix& eps,
                         double from_alpha_bar, double to_alpha_bar) {
  if (from_alpha_bar == to_alpha_bar) return x;
  DenseMatrix out = PredictCleanRows(x, eps, from_alpha_bar);
  const double a = std::sqrt(to_alpha_bar);
  const double s = std::sqrt(1.0 - to_alpha_bar);
  for (size_t k = 0; k < out.size(); ++k) {
    out.data()[k] = a * out.data()[k] + s * eps.data()[k];
  }
  return out;
}

absl::StatusOr<DenseMatrix> DdimForwardStep(const NoisePredictor& predictor,
                                            const DenseMatrix& x_t, int t,
                                            const NoiseSchedule& schedule,
                                            int stride) {
  TABMIA_RETURN_IF_ERROR(CheckPair(t, stride, schedule));
  std::vector<int> ts(x_t.rows(), t);
  TABMIA_ASSIGN_OR_RETURN(DenseMatrix eps, predictor.PredictNoise(x_t, ts));
  return DdimTransfer(x_t, eps, schedule.alpha_bar(t),
                      schedule.alpha_bar(t + stride));
}

absl::StatusOr<DenseMatrix> DdimBackwardStep(const NoisePredictor& predictor,
                                             const DenseMatrix& x_next, int t,
                                             const NoiseSchedule& schedule,
                                             int stride) {
  TABMIA_RETURN_IF_ERROR(CheckPair(t, stride, schedule));
  std::vector<int> ts(x_next.rows(), t + stride);
  TABMIA_ASSIGN_OR_RETURN(DenseMatrix eps, predictor.PredictNoise(x_next, ts));
  return DdimTransfer(x_next, eps, schedule.alpha_bar(t + stride),
                      schedule.alpha_bar(t));
}

absl::StatusOr<DenseMatrix> IteratedForward(const NoisePredictor& predictor,
                                            const DenseMatrix& x0, int t,
                                            const NoiseSchedule& schedule,
                                            int stride) {
  if (stride < 1 || t < 0 || t % stride != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "iterated forward needs t >= 0 divisible by stride, got t=", t,
        " stride=", stride));
  }
  if (t >= schedule.num_steps()) {
    return absl::OutOfRangeError(absl::StrCat(
        "timestep ", t, " outside [0, ", schedule.num_steps(), ")"));
  }
  DenseMatrix x = x0;
  for (int level = 0; level < t; level += stride) {
    auto next = DdimForwardStep(predictor, x, level, schedule, stride);
    if (!next.ok()) {
      return absl::Status(next.status().code(),
                          absl::StrCat("forward step at level ", level, ": ",
                                       next.status().message()));
    }
    x = *std::move(next);
  }
  return x;
}

absl::StatusOr<std::vector<double>> DdimForwardStep(
    const NoisePredictor& predictor, std::span<const double> x_t, int t,
    const NoiseSchedule& schedule, int stride) {
  TABMIA_ASSIGN_OR_RETURN(
      DenseMatrix out,
      DdimForwardStep(predictor, RowMatrix(x_t), t, schedule, stride));
  return std::move(out.data());
}

absl::StatusOr<std::vector<double>> DdimBackwardStep(
    const NoisePredictor& predictor, std::span<const double> x_next, int t,
    const NoiseSchedule& schedule, int stride) {
  TABMIA_ASSIGN_OR_RETURN(
      DenseMatrix out,
      DdimBackwardStep(predictor, RowMatrix(x_next), t, schedule, stride));
  return std::move(out.data());
}

}  // namespace tabmia
