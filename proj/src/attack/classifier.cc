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

#include "tabmia/attack/classifier.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "tabmia/evaluation/metrics.h"
#include "tabmia/io.h"
#include "tabmia/numerics/adam.h"
#include "tabmia/numerics/checkpoint.h"
#include "tabmia/random.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

constexpr double kMinFeatureStd = 1e-12;

absl::Status CheckLabelled(const FeatureMatrix& f, const char* what) {
  TABMIA_RETURN_IF_ERROR(f.Validate());
  if (!f.has_labels()) {
    return absl::InvalidArgumentError(
        absl::StrCat(what, " features carry no labels"));
  }
  size_t pos = 0;
  for (int y : f.labels) {
    if (y != 0 && y != 1) {
      return absl::InvalidArgumentError(
          absl::StrCat(what, " labels must be 0 or 1"));
    }
    pos += y;
  }
  if (pos == 0 || pos == f.labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(what, " labels contain a single class"));
  }
  return absl::OkStatus();
}

DenseMatrix Normalize(const DenseMatrix& x, const std::vector<double>& mean,
                      const std::vector<double>& std) {
  DenseMatrix out(x.rows(), x.cols());
  for (size_t i = 0; i < x.rows(); ++i) {
    auto in = x.row(i);
    auto o = out.row(i);
    for (size_t k = 0; k < in.size(); ++k) o[k] = (in[k] - mean[k]) / std[k];
  }
  return out;
}

DenseMatrix GatherRows(const DenseMatrix& x, std::span<const size_t> idx) {
  DenseMatrix out(idx.size(), x.cols());
  for (size_t i = 0; i < idx.size(); ++i) {
    auto src = x.row(idx[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

absl::Status LogisticEpoch(MlpParams& mlp, AdamState& adam,
                           const DenseMatrix& x, std::span<const int> y,
                           size_t batch_size, Rng& rng,
                           std::vector<size_t>& order) {
  const size_t n = x.rows();
  const size_t bs = batch_size == 0 ? n : std::min(batch_size, n);
  if (bs < n) std::shuffle(order.begin(), order.end(), rng);
  for (size_t start = 0; start < n; start += bs) {
    const size_t end = std::min(n, start + bs);
    std::span<const size_t> idx(order.data() + start, end - start);
    DenseMatrix xb = bs == n ? DenseMatrix() : GatherRows(x, idx);
    const DenseMatrix& batch = bs == n ? x : xb;
    TABMIA_ASSIGN_OR_RETURN(ForwardCache cache, ForwardBatch(mlp, batch));
    DenseMatrix upstream(idx.size(), 1);
    const double scale = 1.0 / static_cast<double>(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) {
      const size_t r = bs == n ? i : idx[i];
      upstream(i, 0) = scale * (cache.output(i, 0) - y[r]);
    }
    TABMIA_ASSIGN_OR_RETURN(
        MlpGradients grads,
        BackwardBatch(mlp, cache, upstream, GradientSite::kPreHead,
                      /*want_input_grad=*/false));
    TABMIA_RETURN_IF_ERROR(AdamStep(mlp, grads, adam));
  }
  return absl::OkStatus();
}

bool Better(const SelectedHparams& a, const SelectedHparams& b) {
  if (a.val_tpr != b.val_tpr) return a.val_tpr > b.val_tpr;
  if (a.hidden_width != b.hidden_width) return a.hidden_width < b.hidden_width;
  return a.lr < b.lr;
}

std::vector<double> ClipScores(const DenseMatrix& out) {
  std::vector<double> s(out.rows());
  for (size_t i = 0; i < out.rows(); ++i) {
    s[i] = std::clamp(out(i, 0), 0.0, 1.0);
  }
  return s;
}

}  // namespace

absl::StatusOr<ModelSplit> ModelBasedSplit(std::span<const std::string> ids,
                                           uint64_t seed,
                                           double train_fraction) {
  std::set<std::string> unique(ids.begin(), ids.end());
  if (unique.size() != ids.size()) {
    return absl::InvalidArgumentError("model ids contain duplicates");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    return absl::InvalidArgumentError("train fraction must lie in (0, 1)");
  }
  const size_t n = ids.size();
  const size_t n_train = static_cast<size_t>(
      std::llround(static_cast<double>(n) * train_fraction));
  if (n < 2 || n_train == 0 || n_train == n) {
    return absl::FailedPreconditionError(absl::StrCat(
        "insufficient models for a model-based split: ", n,
        " train-phase models, need at least one for training and one for "
        "validation"));
  }
  std::vector<std::string> order(ids.begin(), ids.end());
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  ModelSplit split;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.val.assign(order.begin() + n_train, order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  return split;
}

nlohmann::json SelectedHparams::ToJson() const {
  return {{"hidden_width", hidden_width},
          {"lr", lr},
          {"epochs", epochs},
          {"val_tpr", val_tpr},
          {"val_auc", val_auc}};
}

absl::StatusOr<AttackClassifier> TrainAttackClassifier(
    const FeatureMatrix& train, const FeatureMatrix& val,
    const AttackTrainConfig& config) {
  TABMIA_RETURN_IF_ERROR(CheckLabelled(train, "training"));
  TABMIA_RETURN_IF_ERROR(CheckLabelled(val, "validation"));
  if (train.width() != val.width() || train.timesteps != val.timesteps ||
      train.noise_seed != val.noise_seed) {
    return absl::InvalidArgumentError(absl::StrCat(
        "training features (width ", train.width(),
        ") and validation features (width ", val.width(),
        ") were extracted differently"));
  }
  if (config.hidden_widths.empty() || config.learning_rates.empty() ||
      config.epochs < 0) {
    return absl::InvalidArgumentError("empty hyper-parameter grid");
  }
  for (size_t h : config.hidden_widths) {
    if (h < 2) {
      return absl::InvalidArgumentError("hidden width must be >= 2");
    }
  }

  const size_t width = train.width();
  AttackClassifier best;
  best.n_eps = train.n_eps;
  best.timesteps = train.timesteps;
  best.noise_seed = train.noise_seed;
  best.feature_mean.assign(width, 0.0);
  best.feature_std.assign(width, 1.0);
  const double n = static_cast<double>(train.values.rows());
  for (size_t k = 0; k < width; ++k) {
    double sum = 0.0;
    for (size_t i = 0; i < train.values.rows(); ++i) sum += train.values(i, k);
    const double mean = sum / n;
    double sq = 0.0;
    for (size_t i = 0; i < train.values.rows(); ++i) {
      const double d = train.values(i, k) - mean;
      sq += d * d;
    }
    const double std = std::sqrt(sq / n);
    best.feature_mean[k] = mean;
    best.feature_std[k] = std > kMinFeatureStd ? std : 1.0;
  }
  const DenseMatrix x_train =
      Normalize(train.values, best.feature_mean, best.feature_std);
  const DenseMatrix x_val =
      Normalize(val.values, best.feature_mean, best.feature_std);

  bool have_best = false;
  for (size_t hi = 0; hi < config.hidden_widths.size(); ++hi) {
    for (size_t li = 0; li < config.learning_rates.size(); ++li) {
      const size_t h = config.hidden_widths[hi];
      const double lr = config.learning_rates[li];
      const uint64_t seed = DeriveSeed(
          config.seed, absl::StrCat("attack/candidate/", hi, "/", li));
      TABMIA_ASSIGN_OR_RETURN(
          MlpParams mlp, MakeGlorotMlp({width, h, h / 2, 1}, Activation::kRelu,
                                       OutputHead::kSigmoid, seed));
      AdamConfig adam_config;
      adam_config.lr = lr;
      AdamState adam = AdamState::ForParams(mlp, adam_config);
      Rng rng(DeriveSeed(seed, "batches"));
      std::vector<size_t> order(x_train.rows());
      std::iota(order.begin(), order.end(), 0);
      for (int epoch = 0; epoch < config.epochs; ++epoch) {
        absl::Status st =
            LogisticEpoch(mlp, adam, x_train, train.labels,
                          static_cast<size_t>(config.batch_size), rng, order);
        if (!st.ok()) {
          return absl::InternalError(
              absl::StrCat("attack classifier (width ", h, ", lr ", lr,
                           ") diverged in epoch ", epoch, ": ", st.message()));
        }
      }
      TABMIA_ASSIGN_OR_RETURN(DenseMatrix out, PredictBatch(mlp, x_val));
      const std::vector<double> scores = ClipScores(out);
      SelectedHparams cand;
      cand.hidden_width = h;
      cand.lr = lr;
      cand.epochs = config.epochs;
      TABMIA_ASSIGN_OR_RETURN(
          cand.val_tpr, TprAtFpr(scores, val.labels, config.fpr_level));
      TABMIA_ASSIGN_OR_RETURN(cand.val_auc, Auc(scores, val.labels));
      best.candidates.push_back(cand);
      if (!have_best || Better(cand, best.selected)) {
        best.selected = cand;
        best.mlp = std::move(mlp);
        have_best = true;
      }
    }
  }
  return best;
}

absl::StatusOr<std::vector<double>> ClassifierScores(
    const AttackClassifier& classifier, const FeatureMatrix& features) {
  TABMIA_RETURN_IF_ERROR(features.Validate());
  if (features.width() != classifier.input_size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("features have width ", features.width(),
                     ", classifier expects ", classifier.input_size()));
  }
  if (features.timesteps != classifier.timesteps ||
      features.noise_seed != classifier.noise_seed) {
    return absl::InvalidArgumentError(
        "features were extracted with a different noise set or time set");
  }
  TABMIA_ASSIGN_OR_RETURN(
      DenseMatrix out,
      PredictBatch(classifier.mlp,
                   Normalize(features.values, classifier.feature_mean,
                             classifier.feature_std)));
  return ClipScores(out);
}

absl::StatusOr<std::vector<ScoreRecord>> ScoreRecords(
    const AttackClassifier& classifier, const FeatureMatrix& features) {
  TABMIA_ASSIGN_OR_RETURN(std::vector<double> scores,
                          ClassifierScores(classifier, features));
  std::vector<ScoreRecord> out;
  out.reserve(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    out.push_back({features.model_id, features.record_ids[i], scores[i]});
  }
  return out;
}

std::string FormatScoresCsv(std::span<const ScoreRecord> scores) {
  std::string out = "model_id,record_id,score\n";
  for (const ScoreRecord& s : scores) {
    absl::StrAppendFormat(&out, "%s,%d,%.6f\n", s.model_id, s.record_id,
                          s.score);
  }
  return out;
}

absl::StatusOr<std::vector<ScoreRecord>> ParseScoresCsv(
    const std::string& text) {
  std::vector<std::string> lines = absl::StrSplit(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "model_id,record_id,score") {
    return absl::InvalidArgumentError(
        "scores CSV must start with header model_id,record_id,score");
  }
  std::vector<ScoreRecord> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> f = absl::StrSplit(lines[i], ',');
    ScoreRecord r;
    bool ok = f.size() == 3 && !f[0].empty();
    if (ok) {
      r.model_id = f[0];
      auto [p1, e1] =
          std::from_chars(f[1].data(), f[1].data() + f[1].size(), r.record_id);
      auto [p2, e2] =
          std::from_chars(f[2].data(), f[2].data() + f[2].size(), r.score);
      ok = e1 == std::errc() && p1 == f[1].data() + f[1].size() &&
           e2 == std::errc() && p2 == f[2].data() + f[2].size() &&
           std::isfinite(r.score);
    }
    if (!ok) {
      return absl::InvalidArgumentError(
          absl::StrCat("scores CSV line ", i + 1, " is malformed"));
    }
    out.push_back(std::move(r));
  }
  return out;
}

absl::Status WriteAttackClassifier(const std::filesystem::path& path,
                                   const AttackClassifier& classifier) {
  TABMIA_RETURN_IF_ERROR(WriteMlpCheckpoint(path, classifier.mlp));
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : classifier.candidates) cands.push_back(c.ToJson());
  nlohmann::json meta = {{"feature_mean", classifier.feature_mean},
                         {"feature_std", classifier.feature_std},
                         {"n_eps", classifier.n_eps},
                         {"timesteps", classifier.timesteps},
                         {"noise_seed", classifier.noise_seed},
                         {"selected", classifier.selected.ToJson()},
                         {"candidates", cands}};
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  return WriteStringToFile(sidecar, meta.dump(2) + "\n");
}

absl::StatusOr<AttackClassifier> ReadAttackClassifier(
    const std::filesystem::path& path) {
  AttackClassifier c;
  TABMIA_ASSIGN_OR_RETURN(c.mlp, ReadMlpCheckpoint(path));
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  TABMIA_ASSIGN_OR_RETURN(std::string text, ReadFileToString(sidecar));
  try {
    nlohmann::json meta = nlohmann::json::parse(text);
    c.feature_mean = meta.at("feature_mean").get<std::vector<double>>();
    c.feature_std = meta.at("feature_std").get<std::vector<double>>();
    c.n_eps = meta.at("n_eps").get<size_t>();
    c.timesteps = meta.at("timesteps").get<std::vector<int>>();
    c.noise_seed = meta.at("noise_seed").get<uint64_t>();
    const auto& s = meta.at("selected");
    c.selected.hidden_width = s.at("hidden_width").get<size_t>();
    c.selected.lr = s.at("lr").get<double>();
    c.selected.epochs = s.at("epochs").get<int>();
    c.selected.val_tpr = s.at("val_tpr").get<double>();
    c.selected.val_auc = s.at("val_auc").get<double>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(sidecar.string(), ": ", e.what()));
  }
  if (c.feature_mean.size() != c.mlp.input_size() ||
      c.feature_std.size() != c.mlp.input_size() ||
      c.n_eps * c.timesteps.size() != c.mlp.input_size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(sidecar.string(), ": sidecar does not match the MLP"));
  }
  return c;
}

}  // namespace tabmia
