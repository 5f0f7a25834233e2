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

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "tabmia/challenge_spec.h"
#include "tabmia/tabular/encoder.h"
#include "tabmia/tabular/generator.h"
#include "tabmia/tabular/schema.h"
#include "tabmia/tabular/split.h"

namespace tabmia {
namespace {

TableSchema TwoColumnSchema() {
  return *TableSchema::Create(
      {{"x", ColumnKind::kNumerical, {}},
       {"c", ColumnKind::kCategorical, {"a", "b", "c"}},
       {"y", ColumnKind::kNumerical, {}}});
}

TEST(SchemaTest, OffsetsAndDims) {
  TableSchema s = TwoColumnSchema();
  EXPECT_EQ(s.num_numerical(), 2u);
  EXPECT_EQ(s.encoded_dim(), 5u);
  EXPECT_EQ(s.encoded_offset(0), 0u);
  EXPECT_EQ(s.encoded_offset(1), 1u);
  EXPECT_EQ(s.encoded_offset(2), 4u);
  EXPECT_EQ(s.CategoryIndex(1, "c"), 2);
  EXPECT_EQ(s.CategoryIndex(1, "z"), -1);
}

TEST(SchemaTest, CreateRejectsBadColumns) {
  EXPECT_FALSE(TableSchema::Create({{"x", ColumnKind::kNumerical, {}},
                                    {"x", ColumnKind::kNumerical, {}}})
                   .ok());
  EXPECT_FALSE(
      TableSchema::Create({{"c", ColumnKind::kCategorical, {"only"}}}).ok());
  EXPECT_FALSE(
      TableSchema::Create({{"c", ColumnKind::kCategorical, {"a", "a"}}}).ok());
  EXPECT_FALSE(TableSchema::Create({{"a,b", ColumnKind::kNumerical, {}}}).ok());
  EXPECT_FALSE(
      TableSchema::Create({{"record_id", ColumnKind::kNumerical, {}}}).ok());
  EXPECT_FALSE(TableSchema::Create({{"", ColumnKind::kNumerical, {}}}).ok());
}

TEST(SchemaTest, JsonRoundTrip) {
  TableSchema s = TwoColumnSchema();
  auto back = TableSchema::FromJson(s.ToJson());
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, s);
  EXPECT_FALSE(TableSchema::FromJson(nlohmann::json::array()).ok());
}

TEST(SchemaTest, CheckRow) {
  TableSchema s = TwoColumnSchema();
  EXPECT_TRUE(s.CheckRow({1.0, std::string("b"), 2.0}).ok());
  EXPECT_FALSE(s.CheckRow({1.0, std::string("z"), 2.0}).ok());
  EXPECT_FALSE(s.CheckRow({1.0, 2.0, 2.0}).ok());
  EXPECT_FALSE(s.CheckRow({1.0, std::string("a")}).ok());
  EXPECT_FALSE(s.CheckRow({NAN, std::string("a"), 2.0}).ok());
}

TEST(CsvTest, RoundTripIsExactWithAndWithoutIds) {
  TableSchema s = TwoColumnSchema();
  CsvTable t;
  t.record_ids = {7, 3};
  t.rows = {{0.1, std::string("a"), -1e-300}, {1e20, std::string("c"), 2.5}};
  for (bool ids : {true, false}) {
    const std::string text = FormatCsv(s, t, ids);
    auto back = ParseCsv(s, text, ids);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(back->rows, t.rows);
    if (ids) {
      EXPECT_EQ(back->record_ids, t.record_ids);
      EXPECT_EQ(text.substr(0, text.find('\n')), "record_id,x,c,y");
    } else {
      EXPECT_EQ(back->record_ids, (std::vector<int64_t>{0, 1}));
    }
  }
}

TEST(CsvTest, AcceptsCrlfAndRejectsMalformed) {
  TableSchema s = TwoColumnSchema();
  auto ok = ParseCsv(s, "x,c,y\r\n1,a,2\r\n", false);
  ASSERT_TRUE(ok.ok()) << ok.status();
  EXPECT_EQ(ok->rows.size(), 1u);
  EXPECT_FALSE(ParseCsv(s, "x,y,c\n1,2,a\n", false).ok());
  EXPECT_FALSE(ParseCsv(s, "x,c,y\n1,a\n", false).ok());
  EXPECT_FALSE(ParseCsv(s, "x,c,y\n1x,a,2\n", false).ok());
  EXPECT_FALSE(ParseCsv(s, "x,c,y\n1,q,2\n", false).ok());
  EXPECT_FALSE(ParseCsv(s, "", false).ok());
}

TEST(EncoderTest, FitUsesPopulationStd) {
  TableSchema s = TwoColumnSchema();
  std::vector<RawRow> rows = {{1.0, std::string("a"), 10.0},
                              {3.0, std::string("b"), 10.0 + 1e-3},
                              {5.0, std::string("b"), 10.0}};
  auto stats = FitEncoder(s, rows);
  ASSERT_TRUE(stats.ok()) << stats.status();
  EXPECT_DOUBLE_EQ(stats->means[0], 3.0);
  // Population std of {1, 3, 5} is sqrt(8 / 3).
  EXPECT_NEAR(stats->stds[0], std::sqrt(8.0 / 3.0), 1e-15);
}

TEST(EncoderTest, EncodeDecodeHandValues) {
  TableSchema s = TwoColumnSchema();
  EncoderStats stats{{3.0, 0.0}, {2.0, 4.0}};
  auto v = Encode(s, stats, {7.0, std::string("b"), -2.0});
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(*v, (std::vector<double>{2.0, 0.0, 1.0, 0.0, -0.5}));
  auto row = Decode(s, stats, std::vector<double>{1.0, 0.2, 0.1, 0.7, 0.0});
  ASSERT_TRUE(row.ok());
  EXPECT_EQ(std::get<double>((*row)[0]), 5.0);
  EXPECT_EQ(std::get<std::string>((*row)[1]), "c");
  EXPECT_EQ(std::get<double>((*row)[2]), 0.0);
}

TEST(EncoderTest, DecodeTieGoesToLowestIndex) {
  TableSchema s = TwoColumnSchema();
  EncoderStats stats{{0.0, 0.0}, {1.0, 1.0}};
  auto row = Decode(s, stats, std::vector<double>{0.0, 0.4, 0.4, 0.4, 0.0});
  EXPECT_EQ(std::get<std::string>((*row)[1]), "a");
}

TEST(EncoderTest, RoundTripAndErrors) {
  TableSchema s = TwoColumnSchema();
  std::vector<RawRow> rows = {{1.0, std::string("a"), 4.0},
                              {2.0, std::string("c"), 8.0},
                              {6.0, std::string("b"), 5.0}};
  auto stats = FitEncoder(s, rows);
  ASSERT_TRUE(stats.ok());
  auto enc = EncodeRows(s, *stats, rows);
  ASSERT_TRUE(enc.ok());
  auto dec = DecodeRows(s, *stats, *enc);
  ASSERT_TRUE(dec.ok());
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(std::get<double>((*dec)[i][0]), std::get<double>(rows[i][0]),
                1e-12);
    EXPECT_EQ((*dec)[i][1], rows[i][1]);
  }
  std::vector<RawRow> single = {rows[0]};
  EXPECT_FALSE(FitEncoder(s, single).ok());
  std::vector<RawRow> constant = {rows[0], rows[0]};
  EXPECT_FALSE(FitEncoder(s, constant).ok());
  EXPECT_FALSE(Encode(s, *stats, {1.0, std::string("q"), 2.0}).ok());
  EXPECT_FALSE(Decode(s, *stats, std::vector<double>{1.0}).ok());
  auto round = EncoderStats::FromJson(stats->ToJson());
  ASSERT_TRUE(round.ok());
  EXPECT_EQ(*round, *stats);
}

GeneratorConfig TwoComponentConfig(size_t rows) {
  GeneratorConfig g;
  g.schema = TwoColumnSchema();
  g.rows = rows;
  g.components = {
      {0.3, {0.0, 10.0}, {1.0, 2.0}, {{0.5, 0.25, 0.25}}},
      {0.7, {5.0, -10.0}, {0.5, 1.0}, {{0.1, 0.1, 0.8}}},
  };
  return g;
}

TEST(GeneratorTest, ValidateChecksShapesAndWeights) {
  GeneratorConfig g = TwoComponentConfig(10);
  EXPECT_TRUE(g.Validate().ok());
  GeneratorConfig bad = g;
  bad.components[0].weight = 0.5;
  EXPECT_FALSE(bad.Validate().ok());
  bad = g;
  bad.components[1].category_probs = {{0.5, 0.5}};
  EXPECT_FALSE(bad.Validate().ok());
  bad = g;
  bad.components[0].stds = {1.0};
  EXPECT_FALSE(bad.Validate().ok());
  auto round = GeneratorConfig::FromJson(g.ToJson());
  ASSERT_TRUE(round.ok());
  EXPECT_EQ(*round, g);
}

TEST(GeneratorTest, DeterministicAndSchemaConforming) {
  GeneratorConfig g = TwoComponentConfig(50);
  auto a = GenerateSyntheticPopulation(g, 4);
  auto b = GenerateSyntheticPopulation(g, 4);
  auto c = GenerateSyntheticPopulation(g, 5);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->rows, b->rows);
  EXPECT_NE(a->rows, c->rows);
  for (const RawRow& r : a->rows) EXPECT_TRUE(g.schema.CheckRow(r).ok());
}

TEST(GeneratorTest, FrequenciesWithinThreeSigma) {
  const size_t n = 20000;
  GeneratorConfig g = TwoComponentConfig(n);
  auto out = GenerateSyntheticPopulation(g, 17);
  ASSERT_TRUE(out.ok());
  // Mixture component counts are Binomial(n, 0.7).
  const double k1 = std::count(out->component.begin(), out->component.end(), 1);
  EXPECT_NEAR(k1, 0.7 * n, 3 * std::sqrt(n * 0.7 * 0.3));
  // Category "c" has marginal probability 0.3 * 0.25 + 0.7 * 0.8.
  size_t c_count = 0;
  double sum_x_comp1 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (std::get<std::string>(out->rows[i][1]) == "c") ++c_count;
    if (out->component[i] == 1) sum_x_comp1 += std::get<double>(out->rows[i][0]);
  }
  const double p = 0.3 * 0.25 + 0.7 * 0.8;
  EXPECT_NEAR(static_cast<double>(c_count), p * n, 3 * std::sqrt(n * p * (1 - p)));
  EXPECT_NEAR(sum_x_comp1 / k1, 5.0, 3 * 0.5 / std::sqrt(k1));
}

TEST(SplitTest, DisjointBalancedAndDeterministic) {
  ChallengeSpec spec;
  spec.train_phase = 3;
  spec.dev_phase = 2;
  spec.final_phase = 1;
  spec.members_per_model = 10;
  spec.challenge_queries_per_model = 8;
  auto a = MakeSplits(spec.required_population(), spec, 3);
  auto b = MakeSplits(spec.required_population(), spec, 3);
  ASSERT_TRUE(a.ok()) << a.status();
  ASSERT_EQ(a->size(), 6u);
  std::set<int64_t> seen;
  for (size_t i = 0; i < a->size(); ++i) {
    const SplitManifest& m = (*a)[i];
    EXPECT_EQ(m.model_id, ModelSlots(spec)[i].id);
    EXPECT_TRUE(m.Validate().ok());
    EXPECT_EQ(m.members.size(), 10u);
    EXPECT_EQ(m.holdout.size(), 10u);
    EXPECT_EQ(m.challenge_members.size(), 4u);
    EXPECT_EQ(m.challenge_holdout.size(), 4u);
    EXPECT_TRUE(std::is_sorted(m.members.begin(), m.members.end()));
    for (int64_t id : m.challenge_members) {
      EXPECT_TRUE(std::binary_search(m.members.begin(), m.members.end(), id));
    }
    for (int64_t id : m.challenge_holdout) {
      EXPECT_TRUE(std::binary_search(m.holdout.begin(), m.holdout.end(), id));
    }
    for (int64_t id : m.members) EXPECT_TRUE(seen.insert(id).second);
    for (int64_t id : m.holdout) EXPECT_TRUE(seen.insert(id).second);
    EXPECT_EQ(m.members, (*b)[i].members);
    auto round = SplitManifest::FromJson(m.ToJson());
    ASSERT_TRUE(round.ok());
    EXPECT_EQ(round->challenge_holdout, m.challenge_holdout);
  }
  EXPECT_EQ(seen.size(), spec.required_population());
}

TEST(SplitTest, InsufficientPopulation) {
  ChallengeSpec spec;
  auto s = MakeSplits(spec.required_population() - 1, spec, 1);
  EXPECT_EQ(s.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(ChallengeSpecTest, ValidationAndSlots) {
  ChallengeSpec spec;
  EXPECT_EQ(spec.num_models(), 70);
  EXPECT_EQ(ModelSlots(spec)[30].id, "dev_00");
  EXPECT_EQ(ModelSlots(spec)[69].id, "final_19");
  spec.challenge_queries_per_model = 7;
  EXPECT_FALSE(spec.Validate().ok());
  spec.challenge_queries_per_model = 130;
  EXPECT_FALSE(spec.Validate().ok());
  spec = ChallengeSpec{};
  spec.dev_phase = 0;
  EXPECT_FALSE(spec.Validate().ok());
  spec = ChallengeSpec{};
  spec.tracks = {Track::kBlackBox};
  auto round = ChallengeSpec::FromJson(spec.ToJson());
  ASSERT_TRUE(round.ok());
  EXPECT_EQ(*round, spec);
  EXPECT_FALSE(ParseTrack("grey_box").ok());
}

}  // namespace
}  // namespace tabmia
