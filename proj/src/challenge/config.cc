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

#include "tabmia/challenge/config.h"

#include <cstdio>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "tabmia/io.h"
#include "tabmia/random.h"

namespace tabmia {
namespace {

const char* BackwardNoiseName(BackwardNoise b) {
  return b == BackwardNoise::kFresh ? "fresh" : "cached";
}

absl::StatusOr<BackwardNoise> ParseBackwardNoise(const std::string& s) {
  if (s == "fresh") return BackwardNoise::kFresh;
  if (s == "cached") return BackwardNoise::kCached;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown backward noise mode \"", s, "\""));
}

absl::Status CheckTimes(const std::vector<int>& ts, int num_steps,
                        const char* what) {
  for (int t : ts) {
    if (t < 0 || t >= num_steps) {
      return absl::InvalidArgumentError(absl::StrCat(
          what, " entry ", t, " outside [0, ", num_steps, ")"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<NoiseSchedule> DiffusionSettings::Schedule() const {
  return BuildSchedule(num_steps, beta_start, beta_end);
}

DenoiserTrainConfig DiffusionSettings::TrainConfig(uint64_t seed) const {
  DenoiserTrainConfig c;
  c.steps = train_steps;
  c.batch = batch;
  c.lr = lr;
  c.seed = seed;
  return c;
}

AttackTrainConfig AttackSettings::ClassifierConfig(uint64_t seed) const {
  AttackTrainConfig c;
  c.hidden_widths = hidden_widths;
  c.learning_rates = learning_rates;
  c.epochs = epochs;
  c.batch_size = batch_size;
  c.fpr_level = fpr_level;
  c.seed = seed;
  return c;
}

nlohmann::json DiffusionSettingsJson(const DiffusionSettings& d) {
  return {{"num_steps", d.num_steps},
          {"beta_start", d.beta_start},
          {"beta_end", d.beta_end},
          {"hidden_sizes", d.arch.hidden_sizes},
          {"embed_dim", d.arch.embed_dim},
          {"train_steps", d.train_steps},
          {"batch", d.batch},
          {"lr", d.lr},
          {"ddim_stride", d.ddim_stride},
          {"secmi_backward_noise", BackwardNoiseName(d.secmi_backward_noise)}};
}

absl::StatusOr<DiffusionSettings> DiffusionSettingsFromJson(
    const nlohmann::json& j) {
  DiffusionSettings d;
  try {
    d.num_steps = j.value("num_steps", d.num_steps);
    d.beta_start = j.value("beta_start", d.beta_start);
    d.beta_end = j.value("beta_end", d.beta_end);
    d.arch.hidden_sizes = j.value("hidden_sizes", d.arch.hidden_sizes);
    d.arch.embed_dim = j.value("embed_dim", d.arch.embed_dim);
    d.train_steps = j.value("train_steps", d.train_steps);
    d.batch = j.value("batch", d.batch);
    d.lr = j.value("lr", d.lr);
    d.ddim_stride = j.value("ddim_stride", d.ddim_stride);
    if (j.contains("secmi_backward_noise")) {
      auto b = ParseBackwardNoise(j.at("secmi_backward_noise").get<std::string>());
      if (!b.ok()) return b.status();
      d.secmi_backward_noise = *b;
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed diffusion section: ", e.what()));
  }
  return d;
}

absl::Status RunConfig::Validate() const {
  if (workers < 1) return absl::InvalidArgumentError("workers must be >= 1");
  if (absl::Status st = challenge.Validate(); !st.ok()) return st;
  if (absl::Status st = generator.Validate(); !st.ok()) return st;
  if (generator.rows != 0 && generator.rows < challenge.required_population()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "generator.rows ", generator.rows, " is below the ",
        challenge.required_population(), " rows the splits need"));
  }
  const DiffusionSettings& d = diffusion;
  if (absl::Status st = d.Schedule().status(); !st.ok()) return st;
  if (d.arch.hidden_sizes.empty() || d.arch.embed_dim < 2 ||
      d.arch.embed_dim % 2 != 0) {
    return absl::InvalidArgumentError(
        "diffusion needs hidden sizes and an even embed_dim >= 2");
  }
  for (size_t h : d.arch.hidden_sizes) {
    if (h == 0) return absl::InvalidArgumentError("hidden size 0");
  }
  if (d.train_steps < 0 || d.batch < 1 || !(d.lr > 0.0)) {
    return absl::InvalidArgumentError(
        "diffusion train_steps must be >= 0, batch >= 1 and lr > 0");
  }
  if (d.ddim_stride < 1) {
    return absl::InvalidArgumentError("ddim_stride must be >= 1");
  }
  const AttackSettings& a = attack;
  if (a.n_eps < 1) return absl::InvalidArgumentError("n_eps must be >= 1");
  if (absl::Status st = TimeSet::Create(a.timesteps, d.num_steps).status();
      !st.ok()) {
    return st;
  }
  if (a.hidden_widths.empty() || a.learning_rates.empty()) {
    return absl::InvalidArgumentError("attack grid must not be empty");
  }
  for (size_t w : a.hidden_widths) {
    if (w < 2) return absl::InvalidArgumentError("hidden width must be >= 2");
  }
  for (double lr : a.learning_rates) {
    if (!(lr > 0.0)) return absl::InvalidArgumentError("attack lr must be > 0");
  }
  if (a.epochs < 0 || a.batch_size < 0) {
    return absl::InvalidArgumentError("epochs and batch_size must be >= 0");
  }
  if (!(a.train_fraction > 0.0 && a.train_fraction < 1.0)) {
    return absl::InvalidArgumentError("train_fraction must lie in (0, 1)");
  }
  if (!(a.fpr_level > 0.0 && a.fpr_level < 1.0)) {
    return absl::InvalidArgumentError("fpr_level must lie in (0, 1)");
  }
  if (a.secmi_t < 0 || a.secmi_t % d.ddim_stride != 0 ||
      a.secmi_t + d.ddim_stride >= d.num_steps) {
    return absl::InvalidArgumentError(absl::StrCat(
        "secmi_t ", a.secmi_t, " must be a multiple of ddim_stride with "
        "secmi_t + stride < num_steps"));
  }
  if (absl::Status st = CheckTimes(a.naive_timesteps, d.num_steps,
                                   "naive_timesteps");
      !st.ok()) {
    return st;
  }
  if (a.best_noise_candidates < 0) {
    return absl::InvalidArgumentError("best_noise_candidates must be >= 0");
  }
  if (absl::Status st = CheckTimes({a.best_noise_t}, d.num_steps,
                                   "best_noise_t");
      !st.ok()) {
    return st;
  }
  for (double l : evaluation.fpr_levels) {
    if (!(l > 0.0 && l < 1.0)) {
      return absl::InvalidArgumentError("fpr_levels must lie in (0, 1)");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<RunConfig> RunConfig::FromJson(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (!j.is_object()) {
      return absl::InvalidArgumentError("run config must be a JSON object");
    }
    c.master_seed = j.value("master_seed", c.master_seed);
    c.workers = j.value("workers", c.workers);
    c.out_dir = j.value("out_dir", c.out_dir);
    if (j.contains("challenge")) {
      auto spec = ChallengeSpec::FromJson(j.at("challenge"));
      if (!spec.ok()) return spec.status();
      c.challenge = *spec;
    }
    if (!j.contains("generator")) {
      return absl::InvalidArgumentError("run config needs a generator section");
    }
    auto gen = GeneratorConfig::FromJson(j.at("generator"));
    if (!gen.ok()) return gen.status();
    c.generator = *std::move(gen);
    if (j.contains("diffusion")) {
      auto d = DiffusionSettingsFromJson(j.at("diffusion"));
      if (!d.ok()) return d.status();
      c.diffusion = *d;
    }
    if (j.contains("attack")) {
      const nlohmann::json& a = j.at("attack");
      AttackSettings& s = c.attack;
      s.n_eps = a.value("n_eps", s.n_eps);
      s.timesteps = a.value("timesteps", s.timesteps);
      s.hidden_widths = a.value("hidden_widths", s.hidden_widths);
      s.learning_rates = a.value("learning_rates", s.learning_rates);
      s.epochs = a.value("epochs", s.epochs);
      s.batch_size = a.value("batch_size", s.batch_size);
      s.train_fraction = a.value("train_fraction", s.train_fraction);
      s.fpr_level = a.value("fpr_level", s.fpr_level);
      s.secmi_t = a.value("secmi_t", s.secmi_t);
      s.naive_timesteps = a.value("naive_timesteps", s.naive_timesteps);
      s.best_noise_candidates =
          a.value("best_noise_candidates", s.best_noise_candidates);
      s.best_noise_t = a.value("best_noise_t", s.best_noise_t);
    }
    if (j.contains("evaluation")) {
      c.evaluation.fpr_levels =
          j.at("evaluation").value("fpr_levels", c.evaluation.fpr_levels);
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed run config: ", e.what()));
  }
  if (absl::Status st = c.Validate(); !st.ok()) return st;
  return c;
}

nlohmann::json RunConfig::ToJson() const {
  const AttackSettings& a = attack;
  return {{"master_seed", master_seed},
          {"workers", workers},
          {"out_dir", out_dir},
          {"challenge", challenge.ToJson()},
          {"generator", generator.ToJson()},
          {"diffusion", DiffusionSettingsJson(diffusion)},
          {"attack",
           {{"n_eps", a.n_eps},
            {"timesteps", a.timesteps},
            {"hidden_widths", a.hidden_widths},
            {"learning_rates", a.learning_rates},
            {"epochs", a.epochs},
            {"batch_size", a.batch_size},
            {"train_fraction", a.train_fraction},
            {"fpr_level", a.fpr_level},
            {"secmi_t", a.secmi_t},
            {"naive_timesteps", a.naive_timesteps},
            {"best_noise_candidates", a.best_noise_candidates},
            {"best_noise_t", a.best_noise_t}}},
          {"evaluation", {{"fpr_levels", evaluation.fpr_levels}}}};
}

std::string RunConfig::Hash() const {
  // Paths and worker count do not change results, so they are left out.
  nlohmann::json j = ToJson();
  j.erase("out_dir");
  j.erase("workers");
  return absl::StrFormat("%016x", Fnv1a64(j.dump()));
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path) {
  auto text = ReadFileToString(path);
  if (!text.ok()) return text.status();
  nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config ", path, " is not valid JSON"));
  }
  return RunConfig::FromJson(j);
}

}  // namespace tabmia
