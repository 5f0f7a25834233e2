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

#include "tabmia/tabular/encoder.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

absl::Status CheckStats(const TableSchema& schema, const EncoderStats& stats) {
  const size_t n = schema.num_numerical();
  if (stats.means.size() != n || stats.stds.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("encoder stats cover ", stats.means.size(),
                     " columns, schema has ", n, " numerical columns"));
  }
  for (double s : stats.stds) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      return absl::InvalidArgumentError("encoder std must be positive");
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<EncoderStats> EncoderStats::FromJson(const nlohmann::json& j) {
  EncoderStats s;
  try {
    s.means = j.at("means").get<std::vector<double>>();
    s.stds = j.at("stds").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed encoder JSON: ", e.what()));
  }
  if (s.means.size() != s.stds.size()) {
    return absl::InvalidArgumentError("encoder means/stds length mismatch");
  }
  return s;
}

nlohmann::json EncoderStats::ToJson() const {
  return {{"means", means}, {"stds", stds}};
}

absl::StatusOr<EncoderStats> FitEncoder(const TableSchema& schema,
                                        std::span<const RawRow> rows) {
  if (rows.size() < 2) {
    return absl::InvalidArgumentError("fitting an encoder needs >= 2 rows");
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    absl::Status st = schema.CheckRow(rows[i]);
    if (!st.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, ": ", st.message()));
    }
  }
  EncoderStats stats;
  const double n = static_cast<double>(rows.size());
  for (size_t c = 0; c < schema.num_columns(); ++c) {
    if (schema.columns()[c].kind != ColumnKind::kNumerical) continue;
    double sum = 0.0;
    for (const RawRow& r : rows) sum += std::get<double>(r[c]);
    const double mean = sum / n;
    double sq = 0.0;
    for (const RawRow& r : rows) {
      const double dv = std::get<double>(r[c]) - mean;
      sq += dv * dv;
    }
    const double std = std::sqrt(sq / n);
    if (!(std > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "numerical column \"", schema.columns()[c].name,
          "\" has zero variance"));
    }
    stats.means.push_back(mean);
    stats.stds.push_back(std);
  }
  return stats;
}

absl::StatusOr<std::vector<double>> Encode(const TableSchema& schema,
                                           const EncoderStats& stats,
                                           const RawRow& row) {
  TABMIA_RETURN_IF_ERROR(CheckStats(schema, stats));
  TABMIA_RETURN_IF_ERROR(schema.CheckRow(row));
  std::vector<double> out(schema.encoded_dim(), 0.0);
  size_t num_idx = 0;
  for (size_t c = 0; c < schema.num_columns(); ++c) {
    const size_t off = schema.encoded_offset(c);
    if (schema.columns()[c].kind == ColumnKind::kNumerical) {
      out[off] = (std::get<double>(row[c]) - stats.means[num_idx]) /
                 stats.stds[num_idx];
      ++num_idx;
    } else {
      out[off + schema.CategoryIndex(c, std::get<std::string>(row[c]))] = 1.0;
    }
  }
  return out;
}

absl::StatusOr<RawRow> Decode(const TableSchema& schema,
                              const EncoderStats& stats,
                              std::span<const double> vector) {
  TABMIA_RETURN_IF_ERROR(CheckStats(schema, stats));
  if (vector.size() != schema.encoded_dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("encoded vector has length ", vector.size(),
                     ", schema needs ", schema.encoded_dim()));
  }
  RawRow row;
  row.reserve(schema.num_columns());
  size_t num_idx = 0;
  for (size_t c = 0; c < schema.num_columns(); ++c) {
    const ColumnSpec& col = schema.columns()[c];
    const size_t off = schema.encoded_offset(c);
    if (col.kind == ColumnKind::kNumerical) {
      row.emplace_back(vector[off] * stats.stds[num_idx] +
                       stats.means[num_idx]);
      ++num_idx;
      continue;
    }
    size_t best = 0;
    for (size_t k = 1; k < col.categories.size(); ++k) {
      if (vector[off + k] > vector[off + best]) best = k;
    }
    row.emplace_back(col.categories[best]);
  }
  return row;
}

absl::StatusOr<DenseMatrix> EncodeRows(const TableSchema& schema,
                                       const EncoderStats& stats,
                                       std::span<const RawRow> rows) {
  DenseMatrix out(rows.size(), schema.encoded_dim());
  for (size_t i = 0; i < rows.size(); ++i) {
    auto enc = Encode(schema, stats, rows[i]);
    if (!enc.ok()) {
      return absl::Status(enc.status().code(),
                          absl::StrCat("row ", i, ": ", enc.status().message()));
    }
    std::copy(enc->begin(), enc->end(), out.row(i).begin());
  }
  return out;
}

absl::StatusOr<std::vector<RawRow>> DecodeRows(const TableSchema& schema,
                                               const EncoderStats& stats,
                                               const DenseMatrix& encoded) {
  std::vector<RawRow> rows;
  rows.reserve(encoded.rows());
  for (size_t i = 0; i < encoded.rows(); ++i) {
    TABMIA_ASSIGN_OR_RETURN(RawRow r, Decode(schema, stats, encoded.row(i)));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace tabmia
