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

#include "tabmia/numerics/mlp.h"

#include <cmath>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/random.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

double Activate(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kTanh:
      return std::tanh(z);
  }
  return z;
}

// Derivative expressed through the pre-activation value.
double ActivateGrad(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

absl::Status CheckShapes(const std::vector<size_t>& sizes) {
  if (sizes.size() < 2) {
    return absl::InvalidArgumentError(
        "an MLP needs at least an input and an output size");
  }
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("layer size ", i, " is zero"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

size_t MlpParams::ParameterCount() const {
  size_t n = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    n += weights[i].size() + biases[i].size();
  }
  return n;
}

absl::Status MlpParams::Validate() const {
  TABMIA_RETURN_IF_ERROR(CheckShapes(layer_sizes));
  if (weights.size() != layer_sizes.size() - 1 ||
      biases.size() != weights.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", layer_sizes.size() - 1, " layers, found ",
                     weights.size(), " weight and ", biases.size(),
                     " bias blocks"));
  }
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].rows() != layer_sizes[i + 1] ||
        weights[i].cols() != layer_sizes[i]) {
      return absl::InvalidArgumentError(absl::StrCat(
          "layer ", i, ": weight is ", weights[i].rows(), "x",
          weights[i].cols(), ", expected ", layer_sizes[i + 1], "x",
          layer_sizes[i]));
    }
    if (biases[i].size() != layer_sizes[i + 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("layer ", i, ": bias has length ", biases[i].size(),
                       ", expected ", layer_sizes[i + 1]));
    }
  }
  return absl::OkStatus();
}

MlpGradients MlpGradients::ZerosLike(const MlpParams& params) {
  MlpGradients g;
  for (size_t i = 0; i < params.weights.size(); ++i) {
    g.weights.emplace_back(params.weights[i].rows(), params.weights[i].cols());
    g.biases.emplace_back(params.biases[i].size(), 0.0);
  }
  return g;
}

void MlpGradients::Add(const MlpGradients& other) {
  for (size_t i = 0; i < weights.size(); ++i) {
    auto& w = weights[i].data();
    const auto& ow = other.weights[i].data();
    for (size_t k = 0; k < w.size(); ++k) w[k] += ow[k];
    for (size_t k = 0; k < biases[i].size(); ++k) {
      biases[i][k] += other.biases[i][k];
    }
  }
}

void MlpGradients::Scale(double factor) {
  for (size_t i = 0; i < weights.size(); ++i) {
    for (double& v : weights[i].data()) v *= factor;
    for (double& v : biases[i]) v *= factor;
  }
  for (double& v : input.data()) v *= factor;
}

absl::StatusOr<MlpParams> MakeZeroMlp(std::vector<size_t> layer_sizes,
                                      Activation activation, OutputHead head) {
  TABMIA_RETURN_IF_ERROR(CheckShapes(layer_sizes));
  MlpParams p;
  p.activation = activation;
  p.output_head = head;
  for (size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    p.weights.emplace_back(layer_sizes[i + 1], layer_sizes[i]);
    p.biases.emplace_back(layer_sizes[i + 1], 0.0);
  }
  p.layer_sizes = std::move(layer_sizes);
  return p;
}

absl::StatusOr<MlpParams> MakeGlorotMlp(std::vector<size_t> layer_sizes,
                                        Activation activation, OutputHead head,
                                        uint64_t seed) {
  TABMIA_ASSIGN_OR_RETURN(MlpParams p,
                          MakeZeroMlp(std::move(layer_sizes), activation, head));
  Rng rng(seed);
  for (auto& w : p.weights) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& v : w.data()) v = dist(rng);
  }
  return p;
}

absl::StatusOr<ForwardCache> ForwardBatch(const MlpParams& params,
                                          const DenseMatrix& inputs) {
  TABMIA_RETURN_IF_ERROR(params.Validate());
  if (inputs.cols() != params.input_size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("layer 0: input width ", inputs.cols(), ", expected ",
                     params.input_size()));
  }
  ForwardCache cache;
  const size_t n_layers = params.num_layers();
  cache.layer_inputs.reserve(n_layers);
  cache.pre_activations.reserve(n_layers);
  DenseMatrix current = inputs;
  for (size_t l = 0; l < n_layers; ++l) {
    if (current.cols() != params.weights[l].cols()) {
      return absl::InvalidArgumentError(
          absl::StrCat("layer ", l, ": input width ", current.cols(),
                       ", expected ", params.weights[l].cols()));
    }
    DenseMatrix z = AffineRows(current, params.weights[l], params.biases[l]);
    DenseMatrix a = z;
    if (l + 1 < n_layers) {
      for (double& v : a.data()) v = Activate(params.activation, v);
    } else if (params.output_head == OutputHead::kSigmoid) {
      for (double& v : a.data()) v = Sigmoid(v);
    }
    cache.layer_inputs.push_back(std::move(current));
    cache.pre_activations.push_back(std::move(z));
    current = std::move(a);
  }
  cache.output = std::move(current);
  return cache;
}

absl::StatusOr<DenseMatrix> PredictBatch(const MlpParams& params,
                                         const DenseMatrix& inputs) {
  TABMIA_ASSIGN_OR_RETURN(ForwardCache cache, ForwardBatch(params, inputs));
  return std::move(cache.output);
}

absl::StatusOr<MlpGradients> BackwardBatch(const MlpParams& params,
                                           const ForwardCache& cache,
                                           const DenseMatrix& upstream,
                                           GradientSite site,
                                           bool want_input_grad) {
  const size_t n_layers = params.num_layers();
  if (cache.pre_activations.size() != n_layers) {
    return absl::InvalidArgumentError("forward cache does not match params");
  }
  if (upstream.rows() != cache.output.rows() ||
      upstream.cols() != params.output_size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "layer ", n_layers - 1, ": upstream gradient is ", upstream.rows(),
        "x", upstream.cols(), ", expected ", cache.output.rows(), "x",
        params.output_size()));
  }
  MlpGradients grads = MlpGradients::ZerosLike(params);

  // delta holds d(loss)/d(pre-activation) of the current layer.
  DenseMatrix delta = upstream;
  if (site == GradientSite::kOutput &&
      params.output_head == OutputHead::kSigmoid) {
    const auto& out = cache.output.data();
    for (size_t k = 0; k < delta.size(); ++k) {
      delta.data()[k] *= out[k] * (1.0 - out[k]);
    }
  }

  for (size_t l = n_layers; l-- > 0;) {
    const DenseMatrix& x = cache.layer_inputs[l];
    const DenseMatrix& w = params.weights[l];
    DenseMatrix& gw = grads.weights[l];
    std::vector<double>& gb = grads.biases[l];
    const size_t out_dim = w.rows();
    const size_t in_dim = w.cols();
    for (size_t i = 0; i < delta.rows(); ++i) {
      const double* d = delta.row(i).data();
      const double* xi = x.row(i).data();
      for (size_t o = 0; o < out_dim; ++o) {
        const double g = d[o];
        if (g == 0.0) continue;
        gb[o] += g;
        double* gwo = gw.row(o).data();
        for (size_t k = 0; k < in_dim; ++k) gwo[k] += g * xi[k];
      }
    }
    if (l == 0 && !want_input_grad) break;

    DenseMatrix prev(delta.rows(), in_dim);
    for (size_t i = 0; i < delta.rows(); ++i) {
      const double* d = delta.row(i).data();
      double* p = prev.row(i).data();
      for (size_t o = 0; o < out_dim; ++o) {
        const double g = d[o];
        if (g == 0.0) continue;
        const double* wo = w.row(o).data();
        for (size_t k = 0; k < in_dim; ++k) p[k] += g * wo[k];
      }
    }
    if (l > 0) {
      const DenseMatrix& z = cache.pre_activations[l - 1];
      for (size_t k = 0; k < prev.size(); ++k) {
        prev.data()[k] *= ActivateGrad(params.activation, z.data()[k]);
      }
      delta = std::move(prev);
    } else {
      grads.input = std::move(prev);
    }
  }
  return grads;
}

absl::StatusOr<std::vector<double>> MlpForward(const MlpParams& params,
                                               std::span<const double> input) {
  TABMIA_ASSIGN_OR_RETURN(
      DenseMatrix in,
      DenseMatrix::FromData(1, input.size(),
                            std::vector<double>(input.begin(), input.end())));
  TABMIA_ASSIGN_OR_RETURN(DenseMatrix out, PredictBatch(params, in));
  return std::move(out.data());
}

absl::StatusOr<MlpGradients> MlpBackward(const MlpParams& params,
                                         std::span<const double> input,
                                         std::span<const double> upstream) {
  TABMIA_ASSIGN_OR_RETURN(
      DenseMatrix in,
      DenseMatrix::FromData(1, input.size(),
                            std::vector<double>(input.begin(), input.end())));
  TABMIA_ASSIGN_OR_RETURN(ForwardCache cache, ForwardBatch(params, in));
  if (upstream.size() != params.output_size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("layer ", params.num_layers() - 1,
                     ": upstream gradient has length ", upstream.size(),
                     ", expected ", params.output_size()));
  }
  DenseMatrix up(1, upstream.size());
  for (size_t k = 0; k < upstream.size(); ++k) up(0, k) = upstream[k];
  return BackwardBatch(params, cache, up);
}

}  // namespace tabmia
