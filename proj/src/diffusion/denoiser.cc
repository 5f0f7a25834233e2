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

#include "tabmia/diffusion/denoiser.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

constexpr double kPhaseScale = 1000.0;
constexpr double kMaxPeriod = 10000.0;

}  // namespace

void TimeEmbedding(int t, int num_steps, std::span<double> out) {
  const size_t half = out.size() / 2;
  const double phase =
      kPhaseScale * static_cast<double>(t) / static_cast<double>(num_steps);
  for (size_t i = 0; i < half; ++i) {
    const double freq =
        std::pow(kMaxPeriod, -static_cast<double>(i) / static_cast<double>(half));
    out[i] = std::sin(phase * freq);
    out[half + i] = std::cos(phase * freq);
  }
  if (out.size() % 2 == 1) out[out.size() - 1] = 0.0;
}

absl::Status DenoiserParams::Validate() const {
  TABMIA_RETURN_IF_ERROR(mlp.Validate());
  if (mlp.input_size() != input_dim + embed_dim) {
    return absl::InvalidArgumentError(
        absl::StrCat("denoiser input width ", mlp.input_size(), " != d (",
                     input_dim, ") + embed_dim (", embed_dim, ")"));
  }
  if (mlp.output_size() != input_dim) {
    return absl::InvalidArgumentError(absl::StrCat(
        "denoiser output width ", mlp.output_size(), " != d (", input_dim, ")"));
  }
  if (num_steps < 1) {
    return absl::InvalidArgumentError("denoiser num_steps must be >= 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<DenoiserParams> InitDenoiser(size_t input_dim, int num_steps,
                                            const DenoiserConfig& config,
                                            uint64_t seed) {
  if (input_dim == 0) {
    return absl::InvalidArgumentError("denoiser input dimension is zero");
  }
  std::vector<size_t> sizes;
  sizes.push_back(input_dim + config.embed_dim);
  for (size_t h : config.hidden_sizes) sizes.push_back(h);
  sizes.push_back(input_dim);
  DenoiserParams p;
  TABMIA_ASSIGN_OR_RETURN(p.mlp, MakeGlorotMlp(std::move(sizes),
                                               Activation::kRelu,
                                               OutputHead::kLinear, seed));
  p.input_dim = input_dim;
  p.embed_dim = config.embed_dim;
  p.num_steps = num_steps;
  return p;
}

DenseMatrix DenoiserInputs(const DenoiserParams& params,
                           const DenseMatrix& noisy,
                           std::span<const int> timesteps) {
  const size_t d = params.input_dim;
  DenseMatrix in(noisy.rows(), d + params.embed_dim);
  for (size_t i = 0; i < noisy.rows(); ++i) {
    auto row = in.row(i);
    auto x = noisy.row(i);
    std::copy(x.begin(), x.end(), row.begin());
    TimeEmbedding(timesteps[i], params.num_steps, row.subspan(d));
  }
  return in;
}

absl::StatusOr<DenseMatrix> MlpNoisePredictor::PredictNoise(
    const DenseMatrix& noisy, std::span<const int> timesteps) const {
  if (noisy.cols() != params_.input_dim) {
    return absl::InvalidArgumentError(
        absl::StrCat("noisy rows have width ", noisy.cols(), ", denoiser expects ",
                     params_.input_dim));
  }
  if (timesteps.size() != noisy.rows()) {
    return absl::InvalidArgumentError("one timestep per row required");
  }
  return PredictBatch(params_.mlp, DenoiserInputs(params_, noisy, timesteps));
}

}  // namespace tabmia
