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

#include "tabmia/numerics/dense_matrix.h"

#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace tabmia {

absl::StatusOr<DenseMatrix> DenseMatrix::FromData(size_t rows, size_t cols,
                                                  std::vector<double> data) {
  if (data.size() != rows * cols) {
    return absl::InvalidArgumentError(
        absl::StrCat("matrix data has ", data.size(), " entries, expected ",
                     rows, "x", cols));
  }
  DenseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  if (!m.AllFinite()) {
    return absl::InvalidArgumentError("matrix contains non-finite entries");
  }
  return m;
}

DenseMatrix DenseMatrix::Identity(size_t n) {
  DenseMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::Transposed() const {
  DenseMatrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

bool DenseMatrix::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

DenseMatrix AffineRows(const DenseMatrix& in, const DenseMatrix& weights,
                       std::span<const double> bias) {
  const size_t n = in.rows();
  const size_t in_dim = weights.cols();
  const size_t out_dim = weights.rows();
  const DenseMatrix wt = weights.Transposed();  // in_dim x out_dim
  DenseMatrix out(n, out_dim);
  for (size_t i = 0; i < n; ++i) {
    double* o = out.row(i).data();
    const double* x = in.row(i).data();
    for (size_t k = 0; k < in_dim; ++k) {
      const double a = x[k];
      if (a == 0.0) continue;
      const double* w = wt.row(k).data();
      for (size_t j = 0; j < out_dim; ++j) o[j] += a * w[j];
    }
    for (size_t j = 0; j < out_dim; ++j) o[j] += bias[j];
  }
  return out;
}

}  // namespace tabmia
