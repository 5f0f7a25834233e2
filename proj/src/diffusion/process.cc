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

#include "tabmia/diffusion/process.h"

#include <cmath>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/numerics/adam.h"
#include "tabmia/random.h"
#include "tabmia/status_macros.h"

namespace tabmia {

absl::StatusOr<std::vector<double>> ForwardDiffuse(
    std::span<const double> x0, std::span<const double> eps, int t,
    const NoiseSchedule& schedule) {
  TABMIA_RETURN_IF_ERROR(schedule.CheckStep(t));
  if (x0.size() != eps.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("x0 has length ", x0.size(), ", eps has ", eps.size()));
  }
  const double a = std::sqrt(schedule.alpha_bar(t));
  const double s = std::sqrt(1.0 - schedule.alpha_bar(t));
  std::vector<double> xt(x0.size());
  for (size_t k = 0; k < x0.size(); ++k) xt[k] = a * x0[k] + s * eps[k];
  return xt;
}

DenseMatrix ForwardDiffuseRows(const DenseMatrix& x0,
                               std::span<const double> eps, double alpha_bar) {
  const double a = std::sqrt(alpha_bar);
  const double s = std::sqrt(1.0 - alpha_bar);
  DenseMatrix xt(x0.rows(), x0.cols());
  for (size_t i = 0; i < x0.rows(); ++i) {
    auto in = x0.row(i);
    auto out = xt.row(i);
    for (size_t k = 0; k < in.size(); ++k) out[k] = a * in[k] + s * eps[k];
  }
  return xt;
}

absl::StatusOr<std::vector<double>> DiffusionLossRows(
    const NoisePredictor& predictor, const DenseMatrix& x0,
    std::span<const double> eps, int t, const NoiseSchedule& schedule) {
  TABMIA_RETURN_IF_ERROR(schedule.CheckStep(t));
  if (x0.cols() != eps.size() || eps.size() != predictor.dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "record width ", x0.cols(), ", noise length ", eps.size(),
        ", denoiser width ", predictor.dim(), " must agree"));
  }
  DenseMatrix xt = ForwardDiffuseRows(x0, eps, schedule.alpha_bar(t));
  std::vector<int> ts(x0.rows(), t);
  TABMIA_ASSIGN_OR_RETURN(DenseMatrix pred, predictor.PredictNoise(xt, ts));
  std::vector<double> losses(x0.rows());
  for (size_t i = 0; i < x0.rows(); ++i) {
    auto p = pred.row(i);
    double acc = 0.0;
    for (size_t k = 0; k < p.size(); ++k) {
      const double diff = p[k] - eps[k];
      acc += diff * diff;
    }
    if (!std::isfinite(acc)) {
      return absl::InternalError(
          absl::StrCat("non-finite diffusion loss for row ", i, " at t=", t));
    }
    losses[i] = acc;
  }
  return losses;
}

absl::StatusOr<double> DiffusionLoss(const NoisePredictor& predictor,
                                     std::span<const double> x0,
                                     std::span<const double> eps, int t,
                                     const NoiseSchedule& schedule) {
  DenseMatrix row(1, x0.size());
  std::copy(x0.begin(), x0.end(), row.row(0).begin());
  TABMIA_ASSIGN_OR_RETURN(std::vector<double> losses,
                          DiffusionLossRows(predictor, row, eps, t, schedule));
  return losses[0];
}

absl::StatusOr<DenoiserParams> ContinueTraining(
    DenoiserParams params, const DenseMatrix& data,
    const NoiseSchedule& schedule, const DenoiserTrainConfig& config) {
  TABMIA_RETURN_IF_ERROR(params.Validate());
  if (data.rows() == 0) {
    return absl::InvalidArgumentError("cannot train a denoiser on no data");
  }
  if (data.cols() != params.input_dim) {
    return absl::InvalidArgumentError(
        absl::StrCat("training rows have width ", data.cols(),
                     ", denoiser expects ", params.input_dim));
  }
  if (config.steps < 0 || config.batch < 1) {
    return absl::InvalidArgumentError("steps must be >= 0 and batch >= 1");
  }
  if (config.steps == 0) return params;

  // Training randomness is kept apart from the initialisation stream.
  Rng rng(DeriveSeed(config.seed, "denoiser/train"));
  std::uniform_int_distribution<size_t> pick_row(0, data.rows() - 1);
  std::uniform_int_distribution<int> pick_t(0, schedule.num_steps() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);

  AdamConfig adam_config;
  adam_config.lr = config.lr;
  AdamState adam = AdamState::ForParams(params.mlp, adam_config);

  const size_t d = params.input_dim;
  const size_t batch = static_cast<size_t>(config.batch);
  DenseMatrix xt(batch, d);
  DenseMatrix eps(batch, d);
  std::vector<int> ts(batch);
  for (int step = 0; step < config.steps; ++step) {
    for (size_t b = 0; b < batch; ++b) {
      const size_t r = pick_row(rng);
      const int t = pick_t(rng);
      ts[b] = t;
      const double a = std::sqrt(schedule.alpha_bar(t));
      const double s = std::sqrt(1.0 - schedule.alpha_bar(t));
      auto x0 = data.row(r);
      auto e = eps.row(b);
      auto out = xt.row(b);
      for (size_t k = 0; k < d; ++k) {
        e[k] = normal(rng);
        out[k] = a * x0[k] + s * e[k];
      }
    }
    TABMIA_ASSIGN_OR_RETURN(
        ForwardCache cache,
        ForwardBatch(params.mlp, DenoiserInputs(params, xt, ts)));
    DenseMatrix upstream(batch, d);
    double loss = 0.0;
    const double scale = 2.0 / static_cast<double>(batch);
    for (size_t k = 0; k < upstream.size(); ++k) {
      const double diff = cache.output.data()[k] - eps.data()[k];
      loss += diff * diff;
      upstream.data()[k] = scale * diff;
    }
    if (!std::isfinite(loss)) {
      return absl::InternalError(
          absl::StrCat("denoiser training diverged at step ", step));
    }
    TABMIA_ASSIGN_OR_RETURN(
        MlpGradients grads,
        BackwardBatch(params.mlp, cache, upstream, GradientSite::kOutput,
                      /*want_input_grad=*/false));
    absl::Status st = AdamStep(params.mlp, grads, adam);
    if (!st.ok()) {
      return absl::InternalError(absl::StrCat(
          "denoiser training diverged at step ", step, ": ", st.message()));
    }
  }
  return params;
}

absl::StatusOr<DenoiserParams> TrainDenoiser(
    const DenseMatrix& data, const NoiseSchedule& schedule,
    const DenoiserConfig& arch, const DenoiserTrainConfig& config) {
  if (data.rows() == 0) {
    return absl::InvalidArgumentError("cannot train a denoiser on no data");
  }
  TABMIA_ASSIGN_OR_RETURN(
      DenoiserParams params,
      InitDenoiser(data.cols(), schedule.num_steps(), arch, config.seed));
  return ContinueTraining(std::move(params), data, schedule, config);
}

absl::StatusOr<DenseMatrix> Sample(const NoisePredictor& predictor,
                                   const NoiseSchedule& schedule, size_t n,
                                   uint64_t seed) {
  const size_t d = predictor.dim();
  DenseMatrix x(n, d);
  if (n == 0) return x;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : x.data()) v = normal(rng);
  std::vector<int> ts(n);
  for (int t = schedule.num_steps() - 1; t >= 0; --t) {
    std::fill(ts.begin(), ts.end(), t);
    TABMIA_ASSIGN_OR_RETURN(DenseMatrix eps, predictor.PredictNoise(x, ts));
    const double ab = schedule.alpha_bar(t);
    const double coef = schedule.beta(t) / std::sqrt(1.0 - ab);
    const double inv_sqrt_alpha = 1.0 / std::sqrt(schedule.alpha(t));
    double sigma = 0.0;
    if (t > 0) {
      const double ab_prev = schedule.alpha_bar(t - 1);
      sigma = std::sqrt(schedule.beta(t) * (1.0 - ab_prev) / (1.0 - ab));
    }
    for (size_t k = 0; k < x.size(); ++k) {
      double v = inv_sqrt_alpha * (x.data()[k] - coef * eps.data()[k]);
      if (t > 0) v += sigma * normal(rng);
      x.data()[k] = v;
    }
    if (!x.AllFinite()) {
      return absl::InternalError(
          absl::StrCat("non-finite sampler state at t=", t));
    }
  }
  return x;
}

}  // namespace tabmia
