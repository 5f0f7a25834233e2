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

#ifndef TABMIA_TABULAR_ENCODER_H_
#define TABMIA_TABULAR_ENCODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "tabmia/numerics/dense_matrix.h"
#include "tabmia/tabular/schema.h"

namespace tabmia {

// Standardisation statistics, one entry per numerical column in schema
// order. Standard deviations use the population convention (divide by N).
struct EncoderStats {
  std::vector<double> means;
  std::vector<double> stds;

  static absl::StatusOr<EncoderStats> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;

  friend bool operator==(const EncoderStats&, const EncoderStats&) = default;
};

struct EncodedRecord {
  std::vector<double> vector;
  int64_t source_row_id = -1;
};

// Needs at least two rows; rejects rows that do not conform to the schema and
// numerical columns with zero variance.
absl::StatusOr<EncoderStats> FitEncoder(const TableSchema& schema,
                                        std::span<const RawRow> rows);

// Numerical cells become (v - mean) / std; categorical cells a one-hot block.
absl::StatusOr<std::vector<double>> Encode(const TableSchema& schema,
                                           const EncoderStats& stats,
                                           const RawRow& row);

// Inverse of Encode. Each one-hot block decodes to its argmax; ties go to the
// lowest category index.
absl::StatusOr<RawRow> Decode(const TableSchema& schema,
                              const EncoderStats& stats,
                              std::span<const double> vector);

// Encodes every row into one (rows x encoded_dim) matrix.
absl::StatusOr<DenseMatrix> EncodeRows(const TableSchema& schema,
                                       const EncoderStats& stats,
                                       std::span<const RawRow> rows);
absl::StatusOr<std::vector<RawRow>> DecodeRows(const TableSchema& schema,
                                               const EncoderStats& stats,
                                               const DenseMatrix& encoded);

}  // namespace tabmia

#endif  // TABMIA_TABULAR_ENCODER_H_
