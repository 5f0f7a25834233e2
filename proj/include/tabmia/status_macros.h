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

#ifndef TABMIA_STATUS_MACROS_H_
#define TABMIA_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define TABMIA_STATUS_CONCAT_INNER_(a, b) a##b
#define TABMIA_STATUS_CONCAT_(a, b) TABMIA_STATUS_CONCAT_INNER_(a, b)

#define TABMIA_RETURN_IF_ERROR(expr)             \
  do {                                           \
    const absl::Status _tabmia_status = (expr);  \
    if (!_tabmia_status.ok()) return _tabmia_status; \
  } while (0)

#define TABMIA_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                  \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = std::move(tmp).value()

// Evaluates `expr` (a StatusOr) and either assigns the value to `lhs` or
// returns the error status from the enclosing function.
#define TABMIA_ASSIGN_OR_RETURN(lhs, expr) \
  TABMIA_ASSIGN_OR_RETURN_IMPL_(           \
      TABMIA_STATUS_CONCAT_(_tabmia_statusor_, __LINE__), lhs, expr)

#endif  // TABMIA_STATUS_MACROS_H_
