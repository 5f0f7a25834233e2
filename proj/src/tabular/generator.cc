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

#include "tabmia/tabular/generator.h"

#include <cmath>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/random.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

constexpr double kWeightTolerance = 1e-9;

// Inverse-CDF draw so results only depend on the engine, not on a
// library-specific discrete distribution.
size_t DrawCategory(Rng& rng, const std::vector<double>& probs) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return k;
  }
  return probs.size() - 1;
}

}  // namespace

absl::Status GeneratorConfig::Validate() const {
  if (components.empty()) {
    return absl::InvalidArgumentError("generator needs at least one component");
  }
  const size_t n_num = schema.num_numerical();
  const size_t n_cat = schema.num_columns() - n_num;
  double total = 0.0;
  for (size_t k = 0; k < components.size(); ++k) {
    const MixtureComponent& c = components[k];
    if (!(c.weight >= 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("component ", k, " has a negative weight"));
    }
    total += c.weight;
    if (c.means.size() != n_num || c.stds.size() != n_num) {
      return absl::InvalidArgumentError(absl::StrCat(
          "component ", k, " must give ", n_num, " means and stds"));
    }
    for (double s : c.stds) {
      if (!(s >= 0.0) || !std::isfinite(s)) {
        return absl::InvalidArgumentError(
            absl::StrCat("component ", k, " has an invalid std"));
      }
    }
    if (c.category_probs.size() != n_cat) {
      return absl::InvalidArgumentError(absl::StrCat(
          "component ", k, " must give ", n_cat, " categorical distributions"));
    }
    size_t cat_idx = 0;
    for (size_t col = 0; col < schema.num_columns(); ++col) {
      if (schema.columns()[col].kind != ColumnKind::kCategorical) continue;
      const auto& probs = c.category_probs[cat_idx++];
      if (probs.size() != schema.columns()[col].categories.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "component ", k, ": column \"", schema.columns()[col].name,
            "\" needs one probability per category"));
      }
      double sum = 0.0;
      for (double p : probs) {
        if (!(p >= 0.0)) {
          return absl::InvalidArgumentError("negative category probability");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kWeightTolerance) {
        return absl::InvalidArgumentError(absl::StrCat(
            "component ", k, ": category probabilities for \"",
            schema.columns()[col].name, "\" sum to ", sum));
      }
    }
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("mixture weights sum to ", total, ", expected 1"));
  }
  return absl::OkStatus();
}

absl::StatusOr<GeneratorConfig> GeneratorConfig::FromJson(
    const nlohmann::json& j) {
  GeneratorConfig g;
  try {
    TABMIA_ASSIGN_OR_RETURN(g.schema, TableSchema::FromJson(j.at("schema")));
    g.rows = j.at("rows").get<size_t>();
    for (const auto& c : j.at("components")) {
      MixtureComponent m;
      m.weight = c.at("weight").get<double>();
      m.means = c.at("means").get<std::vector<double>>();
      m.stds = c.at("stds").get<std::vector<double>>();
      m.category_probs = c.value("category_probs",
                                 std::vector<std::vector<double>>{});
      g.components.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed generator config: ", e.what()));
  }
  TABMIA_RETURN_IF_ERROR(g.Validate());
  return g;
}

nlohmann::json GeneratorConfig::ToJson() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components) {
    comps.push_back({{"weight", c.weight},
                     {"means", c.means},
                     {"stds", c.stds},
                     {"category_probs", c.category_probs}});
  }
  return {{"schema", schema.ToJson()}, {"rows", rows}, {"components", comps}};
}

absl::StatusOr<GeneratedRows> GenerateSyntheticPopulation(
    const GeneratorConfig& config, uint64_t seed) {
  TABMIA_RETURN_IF_ERROR(config.Validate());
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> weights;
  for (const auto& c : config.components) weights.push_back(c.weight);

  GeneratedRows out;
  out.rows.reserve(config.rows);
  out.component.reserve(config.rows);
  const TableSchema& schema = config.schema;
  for (size_t i = 0; i < config.rows; ++i) {
    const size_t k = DrawCategory(rng, weights);
    const MixtureComponent& comp = config.components[k];
    RawRow row;
    row.reserve(schema.num_columns());
    size_t num_idx = 0, cat_idx = 0;
    for (size_t col = 0; col < schema.num_columns(); ++col) {
      const ColumnSpec& spec = schema.columns()[col];
      if (spec.kind == ColumnKind::kNumerical) {
        row.emplace_back(comp.means[num_idx] +
                         comp.stds[num_idx] * normal(rng));
        ++num_idx;
      } else {
        row.emplace_back(
            spec.categories[DrawCategory(rng, comp.category_probs[cat_idx])]);
        ++cat_idx;
      }
    }
    out.rows.push_back(std::move(row));
    out.component.push_back(static_cast<int>(k));
  }
  return out;
}

}  // namespace tabmia
