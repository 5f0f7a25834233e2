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

#include "tabmia/numerics/checkpoint.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "tabmia/binary.h"
#include "tabmia/io.h"
#include "tabmia/status_macros.h"

namespace tabmia {
namespace {

constexpr std::string_view kMagic = "TMLP";
// Guards against absurd allocations from corrupt headers.
constexpr uint64_t kMaxLayerSize = uint64_t{1} << 24;

}  // namespace

std::string SerializeMlp(const MlpParams& params) {
  ByteWriter w;
  w.Bytes(kMagic);
  w.U32(kMlpCheckpointVersion);
  w.U32(static_cast<uint32_t>(params.layer_sizes.size()));
  for (size_t s : params.layer_sizes) w.U64(s);
  w.U8(static_cast<uint8_t>(params.activation));
  w.U8(static_cast<uint8_t>(params.output_head));
  for (size_t l = 0; l < params.weights.size(); ++l) {
    for (double v : params.weights[l].data()) w.F64(v);
    for (double v : params.biases[l]) w.F64(v);
  }
  return w.Take();
}

absl::StatusOr<MlpParams> DeserializeMlp(std::string_view bytes) {
  ByteReader r(bytes);
  TABMIA_RETURN_IF_ERROR(r.Expect(kMagic));
  uint32_t version = 0;
  TABMIA_RETURN_IF_ERROR(r.U32(version));
  if (version != kMlpCheckpointVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported TMLP version ", version));
  }
  uint32_t n_sizes = 0;
  TABMIA_RETURN_IF_ERROR(r.U32(n_sizes));
  if (n_sizes < 2 || n_sizes > 64) {
    return absl::InvalidArgumentError(
        absl::StrCat("implausible layer count ", n_sizes));
  }
  std::vector<size_t> sizes(n_sizes);
  for (auto& s : sizes) {
    uint64_t v = 0;
    TABMIA_RETURN_IF_ERROR(r.U64(v));
    if (v == 0 || v > kMaxLayerSize) {
      return absl::InvalidArgumentError(
          absl::StrCat("implausible layer size ", v));
    }
    s = static_cast<size_t>(v);
  }
  uint8_t act = 0, head = 0;
  TABMIA_RETURN_IF_ERROR(r.U8(act));
  TABMIA_RETURN_IF_ERROR(r.U8(head));
  if (act > 1 || head > 1) {
    return absl::InvalidArgumentError("unknown activation or head enum");
  }
  uint64_t expected = 0;
  for (size_t i = 0; i + 1 < sizes.size(); ++i) {
    expected += (sizes[i] * sizes[i + 1] + sizes[i + 1]) * 8;
  }
  if (r.remaining() != expected) {
    return absl::InvalidArgumentError(
        absl::StrCat("TMLP payload is ", r.remaining(), " bytes, expected ",
                     expected));
  }
  TABMIA_ASSIGN_OR_RETURN(
      MlpParams p, MakeZeroMlp(std::move(sizes), static_cast<Activation>(act),
                               static_cast<OutputHead>(head)));
  for (size_t l = 0; l < p.weights.size(); ++l) {
    for (double& v : p.weights[l].data()) TABMIA_RETURN_IF_ERROR(r.F64(v));
    for (double& v : p.biases[l]) TABMIA_RETURN_IF_ERROR(r.F64(v));
  }
  return p;
}

absl::Status WriteMlpCheckpoint(const std::filesystem::path& path,
                                const MlpParams& params) {
  return WriteStringToFile(path, SerializeMlp(params));
}

absl::StatusOr<MlpParams> ReadMlpCheckpoint(
    const std::filesystem::path& path) {
  TABMIA_ASSIGN_OR_RETURN(std::string bytes, ReadFileToString(path));
  auto params = DeserializeMlp(bytes);
  if (!params.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        path.string(), ": ", params.status().message()));
  }
  return params;
}

}  // namespace tabmia
