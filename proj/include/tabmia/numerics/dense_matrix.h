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

#ifndef TABMIA_NUMERICS_DENSE_MATRIX_H_
#define TABMIA_NUMERICS_DENSE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace tabmia {

// Row-major matrix of doubles. Rows are exposed as contiguous spans.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  // Fails unless data.size() == rows * cols and every entry is finite.
  static absl::StatusOr<DenseMatrix> FromData(size_t rows, size_t cols,
                                              std::vector<double> data);
  static DenseMatrix Identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  DenseMatrix Transposed() const;
  bool AllFinite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

// out = in * weights^T + bias (broadcast over rows). `weights` is
// (out_dim x in_dim). Each output entry accumulates over the input dimension
// in index order, so a row's result does not depend on the batch it is in.
DenseMatrix AffineRows(const DenseMatrix& in, const DenseMatrix& weights,
                       std::span<const double> bias);

}  // namespace tabmia

#endif  // TABMIA_NUMERICS_DENSE_MATRIX_H_
