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

#ifndef TABMIA_NUMERICS_ADAM_H_
#define TABMIA_NUMERICS_ADAM_H_

#include <cstdint>

#include "absl/status/status.h"
#include "tabmia/numerics/mlp.h"

namespace tabmia {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
};

struct AdamState {
  uint64_t step = 0;
  MlpGradients first_moment;
  MlpGradients second_moment;
  AdamConfig config;

  static AdamState ForParams(const MlpParams& params, AdamConfig config = {});
};

// One bias-corrected Adam update of `params` in place. Rejects non-finite
// gradients before touching any state and names the offending block.
absl::Status AdamStep(MlpParams& params, const MlpGradients& grads,
                      AdamState& state);

}  // namespace tabmia

#endif  // TABMIA_NUMERICS_ADAM_H_
