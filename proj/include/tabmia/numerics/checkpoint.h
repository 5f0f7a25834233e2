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

#ifndef TABMIA_NUMERICS_CHECKPOINT_H_
#define TABMIA_NUMERICS_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "tabmia/numerics/mlp.h"

namespace tabmia {

inline constexpr uint32_t kMlpCheckpointVersion = 1;

// Binary MLP checkpoint, all integers and floats little-endian:
//
//   offset  size  field
//   0       4     magic "TMLP"
//   4       4     u32 format version (currently 1)
//   8       4     u32 number of layer sizes L (= weight layers + 1)
//   12      8*L   u64 layer sizes, input first
//   ..      1     u8 activation (0 = relu, 1 = tanh)
//   ..      1     u8 output head (0 = linear, 1 = sigmoid)
//   ..            for each weight layer i in order: f64 weights[i] in
//                 row-major (out x in) order, then f64 biases[i]
std::string SerializeMlp(const MlpParams& params);
absl::StatusOr<MlpParams> DeserializeMlp(std::string_view bytes);

absl::Status WriteMlpCheckpoint(const std::filesystem::path& path,
                                const MlpParams& params);
absl::StatusOr<MlpParams> ReadMlpCheckpoint(const std::filesystem::path& path);

}  // namespace tabmia

#endif  // TABMIA_NUMERICS_CHECKPOINT_H_
