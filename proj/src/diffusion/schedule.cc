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

#include "tabmia/diffusion/schedule.h"

#include <utility>

#include "absl/strings/str_cat.h"

namespace tabmia {

absl::StatusOr<NoiseSchedule> NoiseSchedule::FromBetas(
    std::vector<double> betas) {
  if (betas.empty()) {
    return absl::InvalidArgumentError("schedule needs at least one step");
  }
  NoiseSchedule s;
  s.alpha_bar_.reserve(betas.size());
  double running = 1.0;
  for (size_t t = 0; t < betas.size(); ++t) {
    if (!(betas[t] > 0.0 && betas[t] < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("beta[", t, "] = ", betas[t], " is outside (0, 1)"));
    }
    running *= 1.0 - betas[t];
    s.alpha_bar_.push_back(running);
  }
  s.beta_ = std::move(betas);
  return s;
}

absl::Status NoiseSchedule::CheckStep(int t) const {
  if (t < 0 || t >= num_steps()) {
    return absl::OutOfRangeError(
        absl::StrCat("timestep ", t, " outside [0, ", num_steps(), ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<NoiseSchedule> BuildSchedule(int num_steps, double beta_start,
                                            double beta_end) {
  if (num_steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("schedule length must be >= 1, got ", num_steps));
  }
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 0 < beta_start <= beta_end < 1, got ", beta_start,
                     ", ", beta_end));
  }
  std::vector<double> betas(num_steps);
  for (int t = 0; t < num_steps; ++t) {
    const double frac =
        num_steps == 1 ? 0.0 : static_cast<double>(t) / (num_steps - 1);
    betas[t] = beta_start + frac * (beta_end - beta_start);
  }
  return NoiseSchedule::FromBetas(std::move(betas));
}

}  // namespace tabmia
