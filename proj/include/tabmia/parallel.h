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

#ifndef TABMIA_PARALLEL_H_
#define TABMIA_PARALLEL_H_

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

#include "absl/status/status.h"

namespace tabmia {

// Runs fn(0..n-1) on up to `workers` threads. Work items must be independent.
// Returns the error of the lowest failing index, so the reported failure does
// not depend on scheduling.
inline absl::Status ParallelFor(size_t n, int workers,
                                const std::function<absl::Status(size_t)>& fn) {
  std::vector<absl::Status> results(n);
  const size_t threads =
      std::min(n, static_cast<size_t>(workers < 1 ? 1 : workers));
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) results[i] = fn(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < n; i = next++) results[i] = fn(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& st : results) {
    if (!st.ok()) return st;
  }
  return absl::OkStatus();
}

}  // namespace tabmia

#endif  // TABMIA_PARALLEL_H_
