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

#include "tabmia/log.h"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace tabmia {
namespace {

LogLevel ParseLevel(const char* s) {
  if (s == nullptr) return LogLevel::kInfo;
  const std::string v(s);
  if (v == "error") return LogLevel::kError;
  if (v == "warn") return LogLevel::kWarn;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

const char* LevelName(LogLevel l) {
  switch (l) {
    case LogLevel::kError:
      return "E";
    case LogLevel::kWarn:
      return "W";
    case LogLevel::kInfo:
      return "I";
    case LogLevel::kDebug:
      return "D";
  }
  return "?";
}

}  // namespace

LogLevel CurrentLogLevel() {
  static const LogLevel level = ParseLevel(std::getenv("TABMIA_LOG"));
  return level;
}

void Log(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) > static_cast<int>(CurrentLogLevel())) return;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::clog << "[tabmia " << LevelName(level) << "] " << message << '\n';
}

}  // namespace tabmia
