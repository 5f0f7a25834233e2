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

#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "tabmia/attack/baselines.h"
#include "tabmia/attack/classifier.h"
#include "tabmia/attack/features.h"
#include "tabmia/diffusion/ddim.h"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/diffusion/process.h"
#include "tabmia/diffusion/schedule.h"
#include "tabmia/evaluation/metrics.h"
#include "tabmia/io.h"

namespace tabmia {
namespace {

DenseMatrix RandomRows(size_t n, size_t d, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DenseMatrix m(n, d);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < d; ++k) m(i, k) = g(rng);
  }
  return m;
}

std::filesystem::path TestDir(const std::string& name) {
  auto dir = std::filesystem::path(testing::TempDir()) / name;
  std::filesystem::remove_all(dir);
  return dir;
}

class AttackFixture : public testing::Test {
 protected:
  void SetUp() override {
    schedule_ = *BuildSchedule(100, 1e-3, 0.05);
    DenoiserConfig arch;
    arch.hidden_sizes = {16, 16};
    arch.embed_dim = 8;
    params_ = *InitDenoiser(3, 100, arch, 7);
    records_ = RandomRows(6, 3, 11);
    ids_ = {10, 11, 12, 13, 14, 15};
  }

  NoiseSchedule schedule_;
  DenoiserParams params_;
  DenseMatrix records_;
  std::vector<int64_t> ids_;
};

TEST_F(AttackFixture, ColumnContract) {
  MlpNoisePredictor pred(params_);
  NoiseSet noises = MakeNoiseSet(4, 3, 5);
  auto times = TimeSet::Create({20, 5, 50}, 100);
  ASSERT_TRUE(times.ok());
  EXPECT_EQ(times->timesteps(), (std::vector<int>{5, 20, 50}));
  auto f = ExtractFeatures(pred, records_, ids_, noises, *times, schedule_);
  ASSERT_TRUE(f.ok()) << f.status();
  EXPECT_EQ(f->values.rows(), 6u);
  EXPECT_EQ(f->width(), 12u);
  EXPECT_EQ(f->record_ids, ids_);
  EXPECT_FALSE(f->has_labels());
  for (size_t i = 0; i < 6; ++i) {
    for (size_t j = 0; j < 4; ++j) {
      for (size_t k = 0; k < 3; ++k) {
        auto loss = DiffusionLoss(pred, records_.row(i), noises.noise(j),
                                  times->timesteps()[k], schedule_);
        EXPECT_EQ(f->values(i, j * 3 + k), *loss);
        EXPECT_EQ(f->column(j, k), j * 3 + k);
      }
    }
  }
}

TEST_F(AttackFixture, FeaturesArePerRecordAndDeterministic) {
  MlpNoisePredictor pred(params_);
  NoiseSet noises = MakeNoiseSet(3, 3, 5);
  auto times = TimeSet::Create({5, 10}, 100);
  auto full = ExtractFeatures(pred, records_, ids_, noises, *times, schedule_);
  auto again = ExtractFeatures(pred, records_, ids_, noises, *times, schedule_);
  EXPECT_EQ(full->values.data(), again->values.data());
  DenseMatrix one(1, 3);
  std::copy(records_.row(4).begin(), records_.row(4).end(), one.row(0).begin());
  std::vector<int64_t> one_id = {14};
  auto single = ExtractFeatures(pred, one, one_id, noises, *times, schedule_);
  for (size_t c = 0; c < full->width(); ++c) {
    EXPECT_EQ(single->values(0, c), full->values(4, c));
  }
}

TEST(NoiseSetTest, SeededAndStandardNormal) {
  NoiseSet a = MakeNoiseSet(2000, 4, 3);
  NoiseSet b = MakeNoiseSet(2000, 4, 3);
  NoiseSet c = MakeNoiseSet(2000, 4, 4);
  EXPECT_EQ(a.noises.data(), b.noises.data());
  EXPECT_NE(a.noises.data(), c.noises.data());
  double sum = 0, sq = 0;
  for (double v : a.noises.data()) {
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(a.noises.data().size());
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(TimeSetTest, Errors) {
  EXPECT_FALSE(TimeSet::Create({}, 100).ok());
  EXPECT_FALSE(TimeSet::Create({5, 5}, 100).ok());
  EXPECT_FALSE(TimeSet::Create({100}, 100).ok());
  EXPECT_FALSE(TimeSet::Create({-1}, 100).ok());
}

TEST_F(AttackFixture, FeatureFileRoundTrip) {
  MlpNoisePredictor pred(params_);
  auto times = TimeSet::Create({5, 10}, 100);
  auto f = ExtractFeatures(pred, records_, ids_, MakeNoiseSet(2, 3, 9), *times,
                           schedule_);
  f->model_id = "m_03";
  f->labels = {1, 0, 1, 0, 1, 0};
  const auto dir = TestDir("feature_round_trip");
  ASSERT_TRUE(WriteFeatureMatrix(dir / "m.tfmx", *f).ok());
  auto back = ReadFeatureMatrix(dir / "m.tfmx");
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->model_id, "m_03");
  EXPECT_EQ(back->record_ids, f->record_ids);
  EXPECT_EQ(back->labels, f->labels);
  EXPECT_EQ(back->n_eps, 2u);
  EXPECT_EQ(back->timesteps, f->timesteps);
  EXPECT_EQ(back->noise_seed, 9u);
  EXPECT_EQ(back->values.data(), f->values.data());

  std::string bytes = *ReadFileToString(dir / "m.tfmx");
  bytes.resize(bytes.size() - 3);
  ASSERT_TRUE(WriteStringToFile(dir / "m.tfmx", bytes).ok());
  EXPECT_FALSE(ReadFeatureMatrix(dir / "m.tfmx").ok());
  EXPECT_EQ(ReadFeatureMatrix(dir / "missing.tfmx").status().code(),
            absl::StatusCode::kNotFound);
}

TEST_F(AttackFixture, ConcatRequiresMatchingLayout) {
  MlpNoisePredictor pred(params_);
  auto t1 = TimeSet::Create({5, 10}, 100);
  auto t2 = TimeSet::Create({5, 20}, 100);
  auto a = ExtractFeatures(pred, records_, ids_, MakeNoiseSet(2, 3, 1), *t1,
                           schedule_);
  auto b = ExtractFeatures(pred, records_, ids_, MakeNoiseSet(2, 3, 1), *t2,
                           schedule_);
  std::vector<FeatureMatrix> same = {*a, *a};
  auto joined = ConcatFeatures(same);
  ASSERT_TRUE(joined.ok());
  EXPECT_EQ(joined->values.rows(), 12u);
  std::vector<FeatureMatrix> mixed = {*a, *b};
  EXPECT_FALSE(ConcatFeatures(mixed).ok());
}

TEST(ModelSplitTest, SizesAndDeterminism) {
  std::vector<std::string> ids;
  for (int i = 0; i < 30; ++i) ids.push_back("m" + std::to_string(100 + i));
  auto s = ModelBasedSplit(ids, 42);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->train.size(), 20u);
  EXPECT_EQ(s->val.size(), 10u);
  std::set<std::string> all(s->train.begin(), s->train.end());
  all.insert(s->val.begin(), s->val.end());
  EXPECT_EQ(all.size(), 30u);
  auto again = ModelBasedSplit(ids, 42);
  EXPECT_EQ(again->train, s->train);
  EXPECT_NE(ModelBasedSplit(ids, 43)->train, s->train);

  std::vector<std::string> six(ids.begin(), ids.begin() + 6);
  auto small = ModelBasedSplit(six, 1);
  EXPECT_EQ(small->train.size(), 4u);
  EXPECT_EQ(small->val.size(), 2u);
}

TEST(ModelSplitTest, Errors) {
  std::vector<std::string> dup = {"a", "b", "a"};
  EXPECT_EQ(ModelBasedSplit(dup, 1).status().code(),
            absl::StatusCode::kInvalidArgument);
  std::vector<std::string> one = {"a"};
  auto s = ModelBasedSplit(one, 1);
  EXPECT_EQ(s.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(std::string(s.status().message()).find("insufficient"),
            std::string::npos);
}

// Minus the diffusion loss with a constant noise estimate v is
// -(||v - eps||^2), independent of the record.
class ConstantPredictor final : public NoisePredictor {
 public:
  explicit ConstantPredictor(std::vector<double> v) : v_(std::move(v)) {}
  size_t dim() const override { return v_.size(); }
  absl::StatusOr<DenseMatrix> PredictNoise(
      const DenseMatrix& x, std::span<const int>) const override {
    DenseMatrix out(x.rows(), v_.size());
    for (size_t i = 0; i < x.rows(); ++i) {
      std::copy(v_.begin(), v_.end(), out.row(i).begin());
    }
    return out;
  }

 private:
  std::vector<double> v_;
};

TEST_F(AttackFixture, NaiveScoresAreNegatedLosses) {
  ConstantPredictor pred({1.0, 0.0, -1.0});
  std::vector<double> eps = {0.0, 0.0, 0.0};
  auto s = NaiveMembershipScores(pred, records_, eps, 10, schedule_);
  ASSERT_TRUE(s.ok());
  for (double v : *s) EXPECT_DOUBLE_EQ(v, -2.0);

  MlpNoisePredictor mlp(params_);
  NoiseSet noises = MakeNoiseSet(1, 3, 2);
  auto scores = NaiveMembershipScores(mlp, records_, noises.noise(0), 20,
                                      schedule_);
  for (size_t i = 0; i < records_.rows(); ++i) {
    EXPECT_EQ((*scores)[i], -*DiffusionLoss(mlp, records_.row(i),
                                            noises.noise(0), 20, schedule_));
  }
}

TEST_F(AttackFixture, SecmiCachedModeHasZeroError) {
  MlpNoisePredictor pred(params_);
  DdimOptions cached;
  cached.backward_noise = BackwardNoise::kCached;
  auto err = SecmiTError(pred, records_, 30, schedule_, cached);
  ASSERT_TRUE(err.ok()) << err.status();
  for (double e : *err) EXPECT_NEAR(e, 0.0, 1e-12);

  auto fresh = SecmiTError(pred, records_, 30, schedule_);
  ASSERT_TRUE(fresh.ok());
  auto scores = SecmiMembershipScores(pred, records_, 30, schedule_);
  for (size_t i = 0; i < fresh->size(); ++i) {
    EXPECT_GT((*fresh)[i], 0.0);
    EXPECT_EQ((*scores)[i], -(*fresh)[i]);
  }
  EXPECT_FALSE(SecmiTError(pred, records_, 99, schedule_).ok());
}

TEST_F(AttackFixture, SecmiErrorMatchesManualSteps) {
  MlpNoisePredictor pred(params_);
  const int t = 12;
  auto xt = IteratedForward(pred, records_, t, schedule_);
  auto next = DdimForwardStep(pred, *xt, t, schedule_);
  auto back = DdimBackwardStep(pred, *next, t, schedule_);
  auto err = SecmiTError(pred, records_, t, schedule_);
  for (size_t i = 0; i < records_.rows(); ++i) {
    double sq = 0.0;
    for (size_t k = 0; k < 3; ++k) {
      const double d = (*back)(i, k) - (*xt)(i, k);
      sq += d * d;
    }
    EXPECT_NEAR((*err)[i], std::sqrt(sq), 1e-12);
  }
}

TEST_F(AttackFixture, BestNoiseOracle) {
  MlpNoisePredictor pred(params_);
  std::vector<int> labels = {1, 0, 1, 0, 1, 0};
  NoiseSet candidates = MakeNoiseSet(8, 3, 17);
  auto r = BestNoiseOracle(pred, records_, labels, candidates.noises, 20,
                           schedule_);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->aucs.size(), 8u);
  for (size_t c = 0; c < 8; ++c) {
    auto s = NaiveMembershipScores(pred, records_, candidates.noise(c), 20,
                                   schedule_);
    EXPECT_EQ(r->aucs[c], *Auc(*s, labels));
    EXPECT_LE(r->aucs[c], r->aucs[r->best_index]);
  }
  EXPECT_FALSE(BestNoiseOracle(pred, records_, {}, candidates.noises, 20,
                               schedule_)
                   .ok());
}

// Members have systematically lower losses in the first columns.
FeatureMatrix SyntheticFeatures(const std::string& id, size_t n,
                                uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  FeatureMatrix f;
  f.model_id = id;
  f.n_eps = 3;
  f.timesteps = {5, 10};
  f.noise_seed = 1;
  f.values = DenseMatrix(n, 6);
  for (size_t i = 0; i < n; ++i) {
    f.record_ids.push_back(static_cast<int64_t>(i));
    const int y = static_cast<int>(i % 2);
    f.labels.push_back(y);
    for (size_t c = 0; c < 6; ++c) {
      f.values(i, c) = 5.0 + g(rng) - (y && c < 3 ? 1.5 : 0.0);
    }
  }
  return f;
}

AttackTrainConfig SmallConfig() {
  AttackTrainConfig c;
  c.hidden_widths = {8, 16};
  c.learning_rates = {1e-2, 3e-3};
  c.epochs = 150;
  c.seed = 3;
  return c;
}

TEST(ClassifierTest, TrainsSelectsAndScores) {
  FeatureMatrix train = SyntheticFeatures("a", 200, 1);
  FeatureMatrix val = SyntheticFeatures("b", 100, 2);
  auto clf = TrainAttackClassifier(train, val, SmallConfig());
  ASSERT_TRUE(clf.ok()) << clf.status();
  EXPECT_EQ(clf->candidates.size(), 4u);
  double best_tpr = 0.0;
  for (const auto& c : clf->candidates) best_tpr = std::max(best_tpr, c.val_tpr);
  EXPECT_EQ(clf->selected.val_tpr, best_tpr);
  EXPECT_EQ(clf->input_size(), 6u);
  for (size_t c = 0; c < 6; ++c) {
    double mean = 0.0;
    for (size_t i = 0; i < 200; ++i) mean += train.values(i, c);
    EXPECT_NEAR(clf->feature_mean[c], mean / 200.0, 1e-12);
  }
  FeatureMatrix test = SyntheticFeatures("c", 200, 3);
  auto scores = ClassifierScores(*clf, test);
  ASSERT_TRUE(scores.ok());
  for (double s : *scores) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  EXPECT_GT(*Auc(*scores, test.labels), 0.8);

  auto again = TrainAttackClassifier(train, val, SmallConfig());
  EXPECT_EQ(*ClassifierScores(*again, test), *scores);
}

TEST(ClassifierTest, InvariantToConstantShiftOfFeatures) {
  FeatureMatrix train = SyntheticFeatures("a", 120, 1);
  FeatureMatrix val = SyntheticFeatures("b", 60, 2);
  FeatureMatrix test = SyntheticFeatures("c", 80, 3);
  auto shift = [](FeatureMatrix f) {
    for (double& v : f.values.data()) v += 3.0;
    return f;
  };
  AttackTrainConfig config = SmallConfig();
  config.epochs = 40;
  auto a = TrainAttackClassifier(train, val, config);
  auto b = TrainAttackClassifier(shift(train), shift(val), config);
  auto sa = ClassifierScores(*a, test);
  auto sb = ClassifierScores(*b, shift(test));
  for (size_t i = 0; i < sa->size(); ++i) {
    EXPECT_NEAR((*sa)[i], (*sb)[i], 1e-9);
  }
}

TEST(ClassifierTest, RejectsMismatchedOrUnlabelledInputs) {
  FeatureMatrix train = SyntheticFeatures("a", 40, 1);
  FeatureMatrix val = SyntheticFeatures("b", 20, 2);
  FeatureMatrix unlabelled = train;
  unlabelled.labels.clear();
  EXPECT_FALSE(TrainAttackClassifier(unlabelled, val, SmallConfig()).ok());
  FeatureMatrix other = val;
  other.timesteps = {5, 20};
  EXPECT_FALSE(TrainAttackClassifier(train, other, SmallConfig()).ok());
}

TEST(ClassifierTest, FileRoundTripPreservesScores) {
  FeatureMatrix train = SyntheticFeatures("a", 80, 1);
  FeatureMatrix val = SyntheticFeatures("b", 40, 2);
  AttackTrainConfig config = SmallConfig();
  config.epochs = 20;
  auto clf = TrainAttackClassifier(train, val, config);
  const auto dir = TestDir("classifier_round_trip");
  ASSERT_TRUE(WriteAttackClassifier(dir / "clf.tmlp", *clf).ok());
  auto back = ReadAttackClassifier(dir / "clf.tmlp");
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*ClassifierScores(*back, val), *ClassifierScores(*clf, val));
  EXPECT_EQ(back->selected.hidden_width, clf->selected.hidden_width);
  EXPECT_EQ(back->timesteps, clf->timesteps);
}

TEST(ScoresCsvTest, RoundTripAndErrors) {
  std::vector<ScoreRecord> s = {{"m_1", 4, 0.25}, {"m_2", 17, 0.1234567}};
  const std::string text = FormatScoresCsv(s);
  EXPECT_EQ(text,
            "model_id,record_id,score\nm_1,4,0.250000\nm_2,17,0.123457\n");
  auto back = ParseScoresCsv(text);
  ASSERT_TRUE(back.ok());
  ASSERT_EQ(back->size(), 2u);
  EXPECT_EQ((*back)[1].model_id, "m_2");
  EXPECT_EQ((*back)[1].record_id, 17);
  EXPECT_EQ((*back)[1].score, 0.123457);
  EXPECT_FALSE(ParseScoresCsv("id,score\n").ok());
  EXPECT_FALSE(ParseScoresCsv("model_id,record_id,score\nm,x,0.1\n").ok());
  EXPECT_FALSE(ParseScoresCsv("model_id,record_id,score\nm,1,nan\n").ok());
  EXPECT_FALSE(ParseScoresCsv("model_id,record_id,score\nm,1\n").ok());
}

}  // namespace
}  // namespace tabmia
