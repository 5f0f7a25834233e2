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

#ifndef TABMIA_BINARY_H_
#define TABMIA_BINARY_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace tabmia {

// Little-endian appenders/readers for the binary artifact formats.
class ByteWriter {
 public:
  void Bytes(std::string_view s) { out_.append(s); }
  void U8(uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U32(uint32_t v) { Unsigned(v, 4); }
  void U64(uint64_t v) { Unsigned(v, 8); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }

  std::string Take() { return std::move(out_); }

 private:
  void Unsigned(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
  }
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  absl::Status Expect(std::string_view magic) {
    if (in_.substr(pos_, magic.size()) != magic) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad magic, expected \"", std::string(magic), "\""));
    }
    pos_ += magic.size();
    return absl::OkStatus();
  }
  absl::Status U8(uint8_t& v) {
    uint64_t x;
    if (auto s = Unsigned(x, 1); !s.ok()) return s;
    v = static_cast<uint8_t>(x);
    return absl::OkStatus();
  }
  absl::Status U32(uint32_t& v) {
    uint64_t x;
    if (auto s = Unsigned(x, 4); !s.ok()) return s;
    v = static_cast<uint32_t>(x);
    return absl::OkStatus();
  }
  absl::Status U64(uint64_t& v) { return Unsigned(v, 8); }
  absl::Status F64(double& v) {
    uint64_t x;
    if (auto s = Unsigned(x, 8); !s.ok()) return s;
    v = std::bit_cast<double>(x);
    return absl::OkStatus();
  }
  bool AtEnd() const { return pos_ == in_.size(); }
  size_t remaining() const { return in_.size() - pos_; }

 private:
  absl::Status Unsigned(uint64_t& v, int n) {
    if (in_.size() - pos_ < static_cast<size_t>(n)) {
      return absl::InvalidArgumentError("truncated binary data");
    }
    v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(in_[pos_ + i]))
           << (8 * i);
    }
    pos_ += n;
    return absl::OkStatus();
  }
  std::string_view in_;
  size_t pos_ = 0;
};

}  // namespace tabmia

#endif  // TABMIA_BINARY_H_
