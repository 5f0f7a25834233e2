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

#ifndef TABMIA_TABULAR_GENERATOR_H_
#define TABMIA_TABULAR_GENERATOR_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "tabmia/tabular/schema.h"

namespace tabmia {

// One mixture component: independent Gaussians over the numerical columns
// and independent categorical distributions over the categorical columns,
// both listed in schema order.
struct MixtureComponent {
  double weight = 1.0;
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<std::vector<double>> category_probs;

  friend bool operator==(const MixtureComponent&,
                         const MixtureComponent&) = default;
};

struct GeneratorConfig {
  TableSchema schema;
  std::vector<MixtureComponent> components;
  size_t rows = 0;

  // Weights must sum to 1 within 1e-9; shapes must match the schema.
  absl::Status Validate() const;

  static absl::StatusOr<GeneratorConfig> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;

  friend bool operator==(const GeneratorConfig&,
                         const GeneratorConfig&) = default;
};

struct GeneratedRows {
  std::vector<RawRow> rows;
  std::vector<int> component;  // mixture component of each row
};

absl::StatusOr<GeneratedRows> GenerateSyntheticPopulation(
    const GeneratorConfig& config, uint64_t seed);

}  // namespace tabmia

#endif  // TABMIA_TABULAR_GENERATOR_H_
