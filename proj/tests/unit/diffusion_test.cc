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
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "tabmia/diffusion/ddim.h"
#include "tabmia/diffusion/denoiser.h"
#include "tabmia/diffusion/process.h"
#include "tabmia/diffusion/schedule.h"

namespace tabmia {
namespace {

// The exact noise predictor for data concentrated on a single point c:
// eps(x_t, t) = (x_t - sqrt(a_t) c) / sqrt(1 - a_t).
class PointMassPredictor final : public NoisePredictor {
 public:
  PointMassPredictor(std::vector<double> c, const NoiseSchedule& s)
      : c_(std::move(c)), s_(s) {}
  size_t dim() const override { return c_.size(); }
  absl::StatusOr<DenseMatrix> PredictNoise(
      const DenseMatrix& x, std::span<const int> t) const override {
    DenseMatrix out(x.rows(), x.cols());
    for (size_t i = 0; i < x.rows(); ++i) {
      const double a = s_.alpha_bar(t[i]);
      for (size_t k = 0; k < x.cols(); ++k) {
        out(i, k) = (x(i, k) - std::sqrt(a) * c_[k]) / std::sqrt(1.0 - a);
      }
    }
    return out;
  }

 private:
  std::vector<double> c_;
  const NoiseSchedule& s_;
};

// Predicts the same vector for every input.
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

DenseMatrix Rows(std::vector<std::vector<double>> rows) {
  DenseMatrix m(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

TEST(ScheduleTest, TwoStepHandValues) {
  auto s = BuildSchedule(2, 0.1, 0.2);
  ASSERT_TRUE(s.ok());
  EXPECT_DOUBLE_EQ(s->beta(0), 0.1);
  EXPECT_DOUBLE_EQ(s->beta(1), 0.2);
  EXPECT_NEAR(s->alpha_bar(0), 0.9, 1e-15);
  EXPECT_NEAR(s->alpha_bar(1), 0.72, 1e-15);
}

TEST(ScheduleTest, DefaultLinearRamp) {
  auto s = BuildSchedule(kDefaultTimesteps, kDefaultBetaStart, kDefaultBetaEnd);
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->num_steps(), 1000);
  EXPECT_DOUBLE_EQ(s->beta(0), 1e-4);
  EXPECT_NEAR(s->beta(999), 0.02, 1e-15);
  EXPECT_NEAR(s->beta(500) - s->beta(499), (0.02 - 1e-4) / 999, 1e-15);
  double prod = 1.0;
  for (int t = 0; t < 1000; ++t) {
    prod *= 1.0 - s->beta(t);
    ASSERT_NEAR(s->alpha_bar(t), prod, 1e-12);
    if (t > 0) ASSERT_LT(s->alpha_bar(t), s->alpha_bar(t - 1));
  }
  EXPECT_LT(s->alpha_bar(999), 1e-4);
}

TEST(ScheduleTest, RejectsInvalidBetasAndSteps) {
  EXPECT_FALSE(NoiseSchedule::FromBetas({0.1, 0.0}).ok());
  EXPECT_FALSE(NoiseSchedule::FromBetas({1.0}).ok());
  EXPECT_FALSE(NoiseSchedule::FromBetas({}).ok());
  EXPECT_FALSE(BuildSchedule(0, 1e-4, 0.02).ok());
  auto s = BuildSchedule(1, 0.3, 0.5);
  ASSERT_TRUE(s.ok());
  EXPECT_DOUBLE_EQ(s->beta(0), 0.3);
  EXPECT_EQ(s->CheckStep(1).code(), absl::StatusCode::kOutOfRange);
  EXPECT_EQ(s->CheckStep(-1).code(), absl::StatusCode::kOutOfRange);
  EXPECT_TRUE(s->CheckStep(0).ok());
}

TEST(TimeEmbeddingTest, HandValues) {
  std::vector<double> e(4);
  TimeEmbedding(1, 1000, e);
  // phase = 1000 * 1 / 1000 = 1; frequencies 1 and 10000^(-1/2).
  EXPECT_DOUBLE_EQ(e[0], std::sin(1.0));
  EXPECT_DOUBLE_EQ(e[1], std::sin(0.01));
  EXPECT_DOUBLE_EQ(e[2], std::cos(1.0));
  EXPECT_DOUBLE_EQ(e[3], std::cos(0.01));
  std::vector<double> z(16);
  TimeEmbedding(0, 1000, z);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(z[i], 0.0);
    EXPECT_EQ(z[8 + i], 1.0);
  }
}

TEST(DenoiserTest, InitShapesAndValidation) {
  DenoiserConfig cfg;
  auto p = InitDenoiser(10, 1000, cfg, 3);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->mlp.layer_sizes, (std::vector<size_t>{26, 128, 128, 10}));
  EXPECT_EQ(p->mlp.activation, Activation::kRelu);
  EXPECT_EQ(p->mlp.output_head, OutputHead::kLinear);
  EXPECT_TRUE(p->Validate().ok());
  DenoiserParams bad = *p;
  bad.input_dim = 9;
  EXPECT_FALSE(bad.Validate().ok());
  EXPECT_FALSE(InitDenoiser(0, 1000, cfg, 3).ok());
}

TEST(DenoiserTest, InputsConcatenateRowAndEmbedding) {
  DenoiserConfig cfg;
  cfg.embed_dim = 4;
  cfg.hidden_sizes = {3};
  auto p = InitDenoiser(2, 1000, cfg, 1);
  DenseMatrix x = Rows({{1.5, -2.0}, {0.0, 3.0}});
  std::vector<int> ts = {1, 0};
  DenseMatrix in = DenoiserInputs(*p, x, ts);
  ASSERT_EQ(in.cols(), 6u);
  EXPECT_EQ(in(0, 0), 1.5);
  EXPECT_EQ(in(0, 1), -2.0);
  EXPECT_DOUBLE_EQ(in(0, 2), std::sin(1.0));
  EXPECT_EQ(in(1, 4), 1.0);
}

TEST(ProcessTest, ForwardDiffuseHandValue) {
  auto s = NoiseSchedule::FromBetas({0.36});
  ASSERT_TRUE(s.ok());
  // sqrt(0.64) * 2 + sqrt(0.36) * (-1) = 1.6 - 0.6
  auto x = ForwardDiffuse(std::vector<double>{2.0}, std::vector<double>{-1.0},
                          0, *s);
  ASSERT_TRUE(x.ok());
  EXPECT_NEAR((*x)[0], 1.0, 1e-15);
  EXPECT_FALSE(ForwardDiffuse(std::vector<double>{2.0},
                              std::vector<double>{1.0, 2.0}, 0, *s)
                   .ok());
  EXPECT_FALSE(ForwardDiffuse(std::vector<double>{2.0},
                              std::vector<double>{1.0}, 1, *s)
                   .ok());
}

TEST(ProcessTest, LossIsSquaredNormOfNoiseError) {
  auto s = BuildSchedule(10, 0.01, 0.2);
  ConstantPredictor pred({1.0, -1.0, 0.5});
  std::vector<double> eps = {0.5, 0.5, 0.5};
  auto loss = DiffusionLoss(pred, std::vector<double>{3, 4, 5}, eps, 7, *s);
  ASSERT_TRUE(loss.ok());
  EXPECT_DOUBLE_EQ(*loss, 0.25 + 2.25 + 0.0);
  auto rows = DiffusionLossRows(pred, Rows({{1, 2, 3}, {4, 5, 6}}), eps, 7, *s);
  ASSERT_TRUE(rows.ok());
  EXPECT_EQ(rows->size(), 2u);
  EXPECT_DOUBLE_EQ((*rows)[1], 2.5);
}

TEST(ProcessTest, ExactPredictorHasZeroLossOnItsPoint) {
  auto s = BuildSchedule(100, 1e-3, 0.05);
  PointMassPredictor pred({0.3, -0.7}, *s);
  for (int t : {0, 10, 99}) {
    auto loss = DiffusionLoss(pred, std::vector<double>{0.3, -0.7},
                              std::vector<double>{1.2, -0.4}, t, *s);
    ASSERT_TRUE(loss.ok());
    EXPECT_NEAR(*loss, 0.0, 1e-20);
  }
}

TEST(ProcessTest, TrainingIsDeterministicAndReducesLoss) {
  auto s = BuildSchedule(100, 1e-3, 0.05);
  DenseMatrix data(16, 2);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (double& v : data.data()) v = 0.5 * n(rng) + 1.0;
  DenoiserConfig arch;
  arch.hidden_sizes = {16};
  arch.embed_dim = 4;
  DenoiserTrainConfig cfg;
  cfg.steps = 0;
  cfg.seed = 9;
  auto init = TrainDenoiser(data, *s, arch, cfg);
  ASSERT_TRUE(init.ok());
  auto expected_init = InitDenoiser(2, 100, arch, 9);
  EXPECT_EQ(init->mlp, expected_init->mlp);
  cfg.steps = 400;
  cfg.lr = 3e-3;
  auto a = TrainDenoiser(data, *s, arch, cfg);
  auto b = TrainDenoiser(data, *s, arch, cfg);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->mlp, b->mlp);
  auto mean_loss = [&](const DenoiserParams& p) {
    MlpNoisePredictor pred(p);
    double total = 0.0;
    std::mt19937_64 r(77);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> eps = {n(r), n(r)};
      const int t = static_cast<int>(r() % 100);
      auto l = DiffusionLossRows(pred, data, eps, t, *s);
      total += std::accumulate(l->begin(), l->end(), 0.0);
    }
    return total;
  };
  EXPECT_LT(mean_loss(*a), mean_loss(*init));
}

TEST(ProcessTest, TrainingRejectsBadInput) {
  auto s = BuildSchedule(10, 1e-3, 0.05);
  DenoiserConfig arch;
  DenoiserTrainConfig cfg;
  EXPECT_FALSE(TrainDenoiser(DenseMatrix(0, 2), *s, arch, cfg).ok());
  cfg.batch = 0;
  EXPECT_FALSE(TrainDenoiser(DenseMatrix(3, 2), *s, arch, cfg).ok());
}

TEST(ProcessTest, SamplingFromExactPredictorRecoversThePoint) {
  auto s = BuildSchedule(200, 1e-4, 0.02);
  const std::vector<double> c = {1.5, -0.25, 0.0};
  PointMassPredictor pred(c, *s);
  auto x = Sample(pred, *s, 5, 123);
  ASSERT_TRUE(x.ok());
  ASSERT_EQ(x->rows(), 5u);
  for (size_t i = 0; i < 5; ++i) {
    for (size_t k = 0; k < 3; ++k) EXPECT_NEAR((*x)(i, k), c[k], 1e-9);
  }
  auto again = Sample(pred, *s, 5, 123);
  EXPECT_EQ(*x, *again);
  auto none = Sample(pred, *s, 0, 123);
  ASSERT_TRUE(none.ok());
  EXPECT_EQ(none->rows(), 0u);
}

TEST(DdimTest, TransferHandValueAndIdentity) {
  DenseMatrix x = Rows({{1.0}});
  DenseMatrix eps = Rows({{0.5}});
  // x0_hat = (1 - sqrt(0.36) 0.5) / sqrt(0.64) = 0.875
  DenseMatrix out = DdimTransfer(x, eps, 0.64, 0.25);
  EXPECT_NEAR(out(0, 0), 0.5 * 0.875 + std::sqrt(0.75) * 0.5, 1e-15);
  EXPECT_EQ(DdimTransfer(x, eps, 0.64, 0.64), x);
  EXPECT_NEAR(PredictCleanRows(x, eps, 0.64)(0, 0), 0.875, 1e-15);
}

TEST(DdimTest, IteratedForwardMatchesManualUnroll) {
  auto s = BuildSchedule(50, 1e-3, 0.05);
  const std::vector<double> c = {0.2, -0.4};
  PointMassPredictor pred(c, *s);
  DenseMatrix x0 = Rows({{0.5, 0.1}, {-1.0, 2.0}});
  auto phi = IteratedForward(pred, x0, 12, *s);
  ASSERT_TRUE(phi.ok());
  // Independent unroll: x_{t+1} from x_t with eps(x_t, t) in closed form.
  for (size_t i = 0; i < 2; ++i) {
    std::vector<double> x = {x0(i, 0), x0(i, 1)};
    for (int t = 0; t < 12; ++t) {
      const double a = s->alpha_bar(t), b = s->alpha_bar(t + 1);
      for (size_t k = 0; k < 2; ++k) {
        const double e = (x[k] - std::sqrt(a) * c[k]) / std::sqrt(1 - a);
        const double x0_hat = (x[k] - std::sqrt(1 - a) * e) / std::sqrt(a);
        x[k] = std::sqrt(b) * x0_hat + std::sqrt(1 - b) * e;
      }
    }
    EXPECT_NEAR((*phi)(i, 0), x[0], 1e-12);
    EXPECT_NEAR((*phi)(i, 1), x[1], 1e-12);
  }
  auto zero = IteratedForward(pred, x0, 0, *s);
  EXPECT_EQ(*zero, x0);
}

TEST(DdimTest, StrideAndRangeChecks) {
  auto s = BuildSchedule(20, 1e-3, 0.05);
  ConstantPredictor pred({0.1});
  DenseMatrix x = Rows({{1.0}});
  EXPECT_FALSE(IteratedForward(pred, x, 5, *s, 2).ok());
  EXPECT_TRUE(IteratedForward(pred, x, 6, *s, 2).ok());
  EXPECT_FALSE(DdimForwardStep(pred, x, 19, *s).ok());
  EXPECT_FALSE(DdimBackwardStep(pred, x, 19, *s).ok());
  EXPECT_FALSE(DdimForwardStep(pred, x, 0, *s, 0).ok());
}

TEST(DdimTest, ForwardThenBackwardOfExactPredictorRoundTrips) {
  auto s = BuildSchedule(30, 1e-3, 0.05);
  PointMassPredictor pred({1.0, 2.0}, *s);
  DenseMatrix x = Rows({{0.3, 0.9}});
  auto up = DdimForwardStep(pred, x, 7, *s);
  auto down = DdimBackwardStep(pred, *up, 7, *s);
  ASSERT_TRUE(down.ok());
  EXPECT_NEAR((*down)(0, 0), 0.3, 1e-12);
  EXPECT_NEAR((*down)(0, 1), 0.9, 1e-12);
  auto single = DdimForwardStep(pred, std::vector<double>{0.3, 0.9}, 7, *s);
  ASSERT_TRUE(single.ok());
  EXPECT_EQ((*single)[0], (*up)(0, 0));
}

}  // namespace
}  // namespace tabmia
