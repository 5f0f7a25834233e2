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

#include "tabmia/tabular/split.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/random.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

bool SortedDisjoint(const std::vector<int64_t>& a,
                    const std::vector<int64_t>& b) {
  std::vector<int64_t> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(both));
  return both.empty();
}

bool IsSubset(const std::vector<int64_t>& sub, const std::vector<int64_t>& of) {
  return std::includes(of.begin(), of.end(), sub.begin(), sub.end());
}

std::vector<int64_t> SortedPrefix(const std::vector<int64_t>& xs, size_t n) {
  std::vector<int64_t> out(xs.begin(), xs.begin() + n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

absl::Status SplitManifest::Validate() const {
  if (members.size() != holdout.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(model_id, ": ", members.size(), " members vs ",
                     holdout.size(), " holdout rows"));
  }
  if (challenge_members.size() != challenge_holdout.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(model_id, ": challenge queries are not balanced"));
  }
  for (const auto* v :
       {&members, &holdout, &challenge_members, &challenge_holdout}) {
    if (!std::is_sorted(v->begin(), v->end()) ||
        std::adjacent_find(v->begin(), v->end()) != v->end()) {
      return absl::InvalidArgumentError(
          absl::StrCat(model_id, ": id lists must be sorted and unique"));
    }
  }
  if (!SortedDisjoint(members, holdout)) {
    return absl::InvalidArgumentError(
        absl::StrCat(model_id, ": members and holdout overlap"));
  }
  if (!IsSubset(challenge_members, members) ||
      !IsSubset(challenge_holdout, holdout)) {
    return absl::InvalidArgumentError(
        absl::StrCat(model_id, ": challenge rows outside the split"));
  }
  return absl::OkStatus();
}

nlohmann::json SplitManifest::ToJson() const {
  return {{"model_id", model_id},
          {"phase", PhaseName(phase)},
          {"members", members},
          {"holdout", holdout},
          {"challenge_members", challenge_members},
          {"challenge_holdout", challenge_holdout}};
}

absl::StatusOr<SplitManifest> SplitManifest::FromJson(const nlohmann::json& j) {
  SplitManifest m;
  try {
    m.model_id = j.at("model_id").get<std::string>();
    TABMIA_ASSIGN_OR_RETURN(m.phase,
                            ParsePhase(j.value("phase", std::string("train"))));
    m.members = j.at("members").get<std::vector<int64_t>>();
    m.holdout = j.at("holdout").get<std::vector<int64_t>>();
    m.challenge_members =
        j.value("challenge_members", std::vector<int64_t>{});
    m.challenge_holdout =
        j.value("challenge_holdout", std::vector<int64_t>{});
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed split manifest: ", e.what()));
  }
  TABMIA_RETURN_IF_ERROR(m.Validate());
  return m;
}

absl::StatusOr<std::vector<SplitManifest>> MakeSplits(size_t population_size,
                                                      const ChallengeSpec& spec,
                                                      uint64_t seed) {
  TABMIA_RETURN_IF_ERROR(spec.Validate());
  if (population_size < spec.required_population()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "insufficient population: ", population_size, " rows, the challenge "
        "needs ", spec.required_population()));
  }
  std::vector<int64_t> order(population_size);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const size_t m = static_cast<size_t>(spec.members_per_model);
  const size_t q = static_cast<size_t>(spec.challenge_queries_per_model) / 2;
  std::vector<SplitManifest> manifests;
  size_t next = 0;
  for (const ModelSlot& slot : ModelSlots(spec)) {
    SplitManifest s;
    s.model_id = slot.id;
    s.phase = slot.phase;
    std::vector<int64_t> mem(order.begin() + next, order.begin() + next + m);
    next += m;
    std::vector<int64_t> hold(order.begin() + next, order.begin() + next + m);
    next += m;
    // Blocks are in shuffled order, so their prefixes are random subsets.
    s.challenge_members = SortedPrefix(mem, q);
    s.challenge_holdout = SortedPrefix(hold, q);
    std::sort(mem.begin(), mem.end());
    std::sort(hold.begin(), hold.end());
    s.members = std::move(mem);
    s.holdout = std::move(hold);
    manifests.push_back(std::move(s));
  }
  return manifests;
}

}  // namespace tabmia
