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

#include "tabmia/tabular/schema.h"

#include <charconv>
#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

bool IsCsvSafe(const std::string& s) {
  return s.find_first_of(",\"\r\n") == std::string::npos;
}

absl::StatusOr<double> ParseDouble(std::string_view s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("\"", std::string(s), "\" is not a number"));
  }
  return v;
}

std::vector<std::string_view> SplitLines(const std::string& text) {
  std::vector<std::string_view> lines;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    std::string_view l(line.data(), line.size());
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.push_back(l);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> SplitFields(std::string_view line) {
  std::vector<std::string> out;
  for (absl::string_view f :
       absl::StrSplit(absl::string_view(line.data(), line.size()), ',')) {
    out.emplace_back(f);
  }
  return out;
}

}  // namespace

absl::StatusOr<TableSchema> TableSchema::Create(
    std::vector<ColumnSpec> columns) {
  if (columns.empty()) {
    return absl::InvalidArgumentError("schema has no columns");
  }
  std::set<std::string> names;
  TableSchema schema;
  size_t offset = 0;
  for (const ColumnSpec& c : columns) {
    if (c.name.empty() || !IsCsvSafe(c.name) || c.name == "record_id") {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid column name \"", c.name, "\""));
    }
    if (!names.insert(c.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate column name \"", c.name, "\""));
    }
    schema.offsets_.push_back(offset);
    if (c.kind == ColumnKind::kNumerical) {
      if (!c.categories.empty()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "numerical column \"", c.name, "\" lists categories"));
      }
      offset += 1;
      continue;
    }
    std::set<std::string> labels(c.categories.begin(), c.categories.end());
    if (c.categories.size() < 2 || labels.size() != c.categories.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "categorical column \"", c.name,
          "\" needs at least two distinct categories"));
    }
    for (const auto& label : c.categories) {
      if (label.empty() || !IsCsvSafe(label)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "invalid category \"", label, "\" in column \"", c.name, "\""));
      }
    }
    offset += c.categories.size();
  }
  schema.columns_ = std::move(columns);
  return schema;
}

absl::StatusOr<TableSchema> TableSchema::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_array()) {
    return absl::InvalidArgumentError(
        "schema JSON must be an object with a \"columns\" array");
  }
  std::vector<ColumnSpec> columns;
  try {
    for (const auto& c : j["columns"]) {
      ColumnSpec spec;
      spec.name = c.at("name").get<std::string>();
      const std::string kind = c.at("kind").get<std::string>();
      if (kind == "numerical") {
        spec.kind = ColumnKind::kNumerical;
      } else if (kind == "categorical") {
        spec.kind = ColumnKind::kCategorical;
        spec.categories = c.at("categories").get<std::vector<std::string>>();
      } else {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown column kind \"", kind, "\""));
      }
      columns.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed schema JSON: ", e.what()));
  }
  return Create(std::move(columns));
}

nlohmann::json TableSchema::ToJson() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const ColumnSpec& c : columns_) {
    nlohmann::json col = {{"name", c.name}};
    if (c.kind == ColumnKind::kNumerical) {
      col["kind"] = "numerical";
    } else {
      col["kind"] = "categorical";
      col["categories"] = c.categories;
    }
    cols.push_back(std::move(col));
  }
  return {{"columns", std::move(cols)}};
}

size_t TableSchema::num_numerical() const {
  size_t n = 0;
  for (const auto& c : columns_) n += c.kind == ColumnKind::kNumerical;
  return n;
}

size_t TableSchema::encoded_dim() const {
  size_t d = 0;
  for (const auto& c : columns_) {
    d += c.kind == ColumnKind::kNumerical ? 1 : c.categories.size();
  }
  return d;
}

int TableSchema::CategoryIndex(size_t c, const std::string& label) const {
  const auto& cats = columns_[c].categories;
  for (size_t i = 0; i < cats.size(); ++i) {
    if (cats[i] == label) return static_cast<int>(i);
  }
  return -1;
}

absl::Status TableSchema::CheckRow(const RawRow& row) const {
  if (row.size() != columns_.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "row has ", row.size(), " cells, schema has ", columns_.size()));
  }
  for (size_t c = 0; c < columns_.size(); ++c) {
    const ColumnSpec& col = columns_[c];
    if (col.kind == ColumnKind::kNumerical) {
      const double* v = std::get_if<double>(&row[c]);
      if (v == nullptr) {
        return absl::InvalidArgumentError(
            absl::StrCat("column \"", col.name, "\" expects a number"));
      }
      if (!std::isfinite(*v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-finite value in column \"", col.name, "\""));
      }
    } else {
      const std::string* s = std::get_if<std::string>(&row[c]);
      if (s == nullptr) {
        return absl::InvalidArgumentError(
            absl::StrCat("column \"", col.name, "\" expects a category"));
      }
      if (CategoryIndex(c, *s) < 0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "unknown category \"", *s, "\" in column \"", col.name, "\""));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<CsvTable> ParseCsv(const TableSchema& schema,
                                  const std::string& text,
                                  bool with_record_id) {
  std::vector<std::string_view> lines = SplitLines(text);
  if (lines.empty()) {
    return absl::InvalidArgumentError("CSV is missing its header row");
  }
  std::vector<std::string> expected;
  if (with_record_id) expected.push_back("record_id");
  for (const auto& c : schema.columns()) expected.push_back(c.name);
  if (SplitFields(lines[0]) != expected) {
    return absl::InvalidArgumentError(
        absl::StrCat("CSV header \"", std::string(lines[0]),
                     "\" does not match \"", absl::StrJoin(expected, ","),
                     "\""));
  }
  CsvTable table;
  const size_t skip = with_record_id ? 1 : 0;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = SplitFields(lines[i]);
    if (fields.size() != expected.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("CSV line ", i + 1, " has ", fields.size(),
                       " fields, expected ", expected.size()));
    }
    int64_t id = static_cast<int64_t>(i - 1);
    if (with_record_id) {
      auto [ptr, ec] = std::from_chars(
          fields[0].data(), fields[0].data() + fields[0].size(), id);
      if (ec != std::errc() || ptr != fields[0].data() + fields[0].size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("CSV line ", i + 1, ": bad record_id \"", fields[0],
                         "\""));
      }
    }
    RawRow row;
    row.reserve(schema.num_columns());
    for (size_t c = 0; c < schema.num_columns(); ++c) {
      const std::string& f = fields[c + skip];
      if (schema.columns()[c].kind == ColumnKind::kNumerical) {
        auto v = ParseDouble(f);
        if (!v.ok()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "CSV line ", i + 1, ", column \"", schema.columns()[c].name,
              "\": ", v.status().message()));
        }
        row.emplace_back(*v);
      } else {
        row.emplace_back(f);
      }
    }
    absl::Status st = schema.CheckRow(row);
    if (!st.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("CSV line ", i + 1, ": ", st.message()));
    }
    table.record_ids.push_back(id);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string FormatCsv(const TableSchema& schema, const CsvTable& table,
                      bool with_record_id) {
  std::string out;
  if (with_record_id) out += "record_id,";
  for (size_t c = 0; c < schema.num_columns(); ++c) {
    if (c > 0) out += ',';
    out += schema.columns()[c].name;
  }
  out += '\n';
  for (size_t i = 0; i < table.rows.size(); ++i) {
    if (with_record_id) absl::StrAppend(&out, table.record_ids[i], ",");
    const RawRow& row = table.rows[i];
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      if (const double* v = std::get_if<double>(&row[c])) {
        out += FormatDouble(*v);
      } else {
        out += std::get<std::string>(row[c]);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace tabmia
