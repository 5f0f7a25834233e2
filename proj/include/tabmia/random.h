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

#ifndef TABMIA_RANDOM_H_
#define TABMIA_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace tabmia {

using Rng = std::mt19937_64;

// Stable (process- and platform-independent) derivation of a stage seed from
// the master seed and a stage name such as "target/dev_01".
uint64_t DeriveSeed(uint64_t master_seed, std::string_view stage);

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes);

}  // namespace tabmia

#endif  // TABMIA_RANDOM_H_
