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

#ifndef TABMIA_TABULAR_SCHEMA_H_
#define TABMIA_TABULAR_SCHEMA_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "tabmia/io.h"

namespace tabmia {

enum class ColumnKind { kNumerical, kCategorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumerical;
  std::vector<std::string> categories;  // categorical only

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

// A raw cell: a number for numerical columns, a category label otherwise.
using CellValue = std::variant<double, std::string>;
using RawRow = std::vector<CellValue>;

class TableSchema {
 public:
  TableSchema() = default;

  // Column names must be unique and non-empty; categorical columns need at
  // least two distinct categories. Names and labels may not contain commas,
  // quotes or line breaks (they are written unquoted to CSV).
  static absl::StatusOr<TableSchema> Create(std::vector<ColumnSpec> columns);

  static absl::StatusOr<TableSchema> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  size_t num_columns() const { return columns_.size(); }
  size_t num_numerical() const;
  // (#numerical) + sum of category counts.
  size_t encoded_dim() const;
  // Offset of column c's first slot in the encoded vector.
  size_t encoded_offset(size_t c) const { return offsets_[c]; }

  // Index of `label` within column c's categories, or -1.
  int CategoryIndex(size_t c, const std::string& label) const;

  // Checks arity, cell kinds, finiteness and category membership.
  absl::Status CheckRow(const RawRow& row) const;

  friend bool operator==(const TableSchema& a, const TableSchema& b) {
    return a.columns_ == b.columns_;
  }

 private:
  std::vector<ColumnSpec> columns_;
  std::vector<size_t> offsets_;
};

// CSV with a mandatory header row, comma separator, "." decimal point and no
// quoting. With `with_record_id` the first column is "record_id" followed by
// the schema columns; otherwise the header is exactly the schema columns and
// record ids are the 0-based data line numbers.
struct CsvTable {
  std::vector<int64_t> record_ids;
  std::vector<RawRow> rows;
};

absl::StatusOr<CsvTable> ParseCsv(const TableSchema& schema,
                                  const std::string& text,
                                  bool with_record_id);
std::string FormatCsv(const TableSchema& schema, const CsvTable& table,
                      bool with_record_id);

}  // namespace tabmia

#endif  // TABMIA_TABULAR_SCHEMA_H_
