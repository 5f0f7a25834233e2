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

#ifndef TABMIA_DIFFUSION_SCHEDULE_H_
#define TABMIA_DIFFUSION_SCHEDULE_H_

#include <cstddef>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace tabmia {

inline constexpr int kDefaultTimesteps = 1000;
inline constexpr double kDefaultBetaStart = 1e-4;
inline constexpr double kDefaultBetaEnd = 0.02;

// Per-step variances beta[t] and their cumulative signal coefficients
// alpha_bar[t] = prod_{s <= t} (1 - beta[s]). x_t is distributed as
// sqrt(alpha_bar[t]) x_0 + sqrt(1 - alpha_bar[t]) eps.
class NoiseSchedule {
 public:
  // Validates 0 < beta < 1 for every step.
  static absl::StatusOr<NoiseSchedule> FromBetas(std::vector<double> betas);

  int num_steps() const { return static_cast<int>(beta_.size()); }
  double beta(int t) const { return beta_[t]; }
  double alpha(int t) const { return 1.0 - beta_[t]; }
  double alpha_bar(int t) const { return alpha_bar_[t]; }
  const std::vector<double>& betas() const { return beta_; }
  const std::vector<double>& alpha_bars() const { return alpha_bar_; }

  absl::Status CheckStep(int t) const;

 private:
  std::vector<double> beta_;
  std::vector<double> alpha_bar_;
};

// Linear beta ramp from beta_start to beta_end over `num_steps` steps. A
// single-step schedule uses beta_start.
absl::StatusOr<NoiseSchedule> BuildSchedule(int num_steps, double beta_start,
                                            double beta_end);

}  // namespace tabmia

#endif  // TABMIA_DIFFUSION_SCHEDULE_H_
