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

#include "tabmia/numerics/adam.h"

#include <cmath>
#include <span>

#include "absl/strings/str_cat.h"

namespace tabmia {
namespace {

void UpdateBlock(std::span<double> param, std::span<const double> grad,
                 std::span<double> m, std::span<double> v,
                 const AdamConfig& c, double correction1,
                 double correction2) {
  for (size_t k = 0; k < param.size(); ++k) {
    const double g = grad[k];
    m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g;
    v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g * g;
    const double m_hat = m[k] / correction1;
    const double v_hat = v[k] / correction2;
    param[k] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps_hat);
  }
}

bool AllFinite(std::span<const double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

AdamState AdamState::ForParams(const MlpParams& params, AdamConfig config) {
  AdamState s;
  s.first_moment = MlpGradients::ZerosLike(params);
  s.second_moment = MlpGradients::ZerosLike(params);
  s.config = config;
  return s;
}

absl::Status AdamStep(MlpParams& params, const MlpGradients& grads,
                      AdamState& state) {
  if (!(state.config.lr > 0.0)) {
    return absl::InvalidArgumentError("Adam learning rate must be positive");
  }
  if (grads.weights.size() != params.weights.size() ||
      state.first_moment.weights.size() != params.weights.size()) {
    return absl::InvalidArgumentError("gradient/state layer count mismatch");
  }
  for (size_t l = 0; l < params.weights.size(); ++l) {
    if (grads.weights[l].size() != params.weights[l].size() ||
        grads.biases[l].size() != params.biases[l].size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("gradient shape mismatch in layer ", l));
    }
    if (!grads.weights[l].AllFinite()) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite gradient in weights[", l, "]"));
    }
    if (!AllFinite(grads.biases[l])) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite gradient in biases[", l, "]"));
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.config.beta1, t);
  const double c2 = 1.0 - std::pow(state.config.beta2, t);
  for (size_t l = 0; l < params.weights.size(); ++l) {
    UpdateBlock(params.weights[l].data(), grads.weights[l].data(),
                state.first_moment.weights[l].data(),
                state.second_moment.weights[l].data(), state.config, c1, c2);
    UpdateBlock(params.biases[l], grads.biases[l],
                state.first_moment.biases[l], state.second_moment.biases[l],
                state.config, c1, c2);
  }
  return absl::OkStatus();
}

}  // namespace tabmia
