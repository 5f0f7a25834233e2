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

#ifndef TABMIA_NUMERICS_MLP_H_
#define TABMIA_NUMERICS_MLP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "tabmia/numerics/dense_matrix.h"

namespace tabmia {

enum class Activation : uint8_t { kRelu = 0, kTanh = 1 };
enum class OutputHead : uint8_t { kLinear = 0, kSigmoid = 1 };

// Fully connected feed-forward network. Hidden layers use `activation`; the
// last layer is followed by `output_head`.
//
// weights[i] has shape (layer_sizes[i + 1], layer_sizes[i]) and biases[i] has
// length layer_sizes[i + 1].
struct MlpParams {
  std::vector<size_t> layer_sizes;
  std::vector<DenseMatrix> weights;
  std::vector<std::vector<double>> biases;
  Activation activation = Activation::kRelu;
  OutputHead output_head = OutputHead::kLinear;

  size_t input_size() const { return layer_sizes.front(); }
  size_t output_size() const { return layer_sizes.back(); }
  size_t num_layers() const { return weights.size(); }
  size_t ParameterCount() const;

  absl::Status Validate() const;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

// Gradients (or any other quantity) with the same shapes as MlpParams.
struct MlpGradients {
  std::vector<DenseMatrix> weights;
  std::vector<std::vector<double>> biases;
  // d(output) / d(input), one row per batch entry. Empty when not requested.
  DenseMatrix input;

  static MlpGradients ZerosLike(const MlpParams& params);
  void Add(const MlpGradients& other);
  void Scale(double factor);
};

// All-zero parameters of the given shape.
absl::StatusOr<MlpParams> MakeZeroMlp(std::vector<size_t> layer_sizes,
                                      Activation activation, OutputHead head);

// Glorot-uniform weights, zero biases.
absl::StatusOr<MlpParams> MakeGlorotMlp(std::vector<size_t> layer_sizes,
                                        Activation activation, OutputHead head,
                                        uint64_t seed);

// Per-layer activations recorded by ForwardBatch for use in BackwardBatch.
struct ForwardCache {
  // layer_inputs[i] is the (batch x layer_sizes[i]) input to layer i.
  std::vector<DenseMatrix> layer_inputs;
  // pre_activations[i] = layer_inputs[i] * W_i^T + b_i.
  std::vector<DenseMatrix> pre_activations;
  DenseMatrix output;
};

// Where the upstream gradient handed to BackwardBatch is taken.
enum class GradientSite {
  kOutput,   // w.r.t. the output after the head
  kPreHead,  // w.r.t. the last pre-activation (the logit for sigmoid heads)
};

absl::StatusOr<ForwardCache> ForwardBatch(const MlpParams& params,
                                          const DenseMatrix& inputs);

// Same as ForwardBatch but keeps only the output.
absl::StatusOr<DenseMatrix> PredictBatch(const MlpParams& params,
                                         const DenseMatrix& inputs);

// Parameter gradients are summed over the batch rows.
absl::StatusOr<MlpGradients> BackwardBatch(
    const MlpParams& params, const ForwardCache& cache,
    const DenseMatrix& upstream, GradientSite site = GradientSite::kOutput,
    bool want_input_grad = true);

// Single-vector conveniences.
absl::StatusOr<std::vector<double>> MlpForward(const MlpParams& params,
                                               std::span<const double> input);
absl::StatusOr<MlpGradients> MlpBackward(const MlpParams& params,
                                         std::span<const double> input,
                                         std::span<const double> upstream);

double Sigmoid(double z);

}  // namespace tabmia

#endif  // TABMIA_NUMERICS_MLP_H_
