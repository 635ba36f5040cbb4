// Copyright 2026 The Nebula Authors
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

#ifndef NEBULA_STATUS_MACROS_H_
#define NEBULA_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define NEBULA_RETURN_IF_ERROR(expr)          \
  do {                                        \
    ::absl::Status _nebula_status = (expr);   \
    if (!_nebula_status.ok()) return _nebula_status; \
  } while (0)

#define NEBULA_CONCAT_INNER_(x, y) x##y
#define NEBULA_CONCAT_(x, y) NEBULA_CONCAT_INNER_(x, y)

#define NEBULA_ASSIGN_OR_RETURN(lhs, rexpr) \
  NEBULA_ASSIGN_OR_RETURN_IMPL_(NEBULA_CONCAT_(_nebula_statusor_, __LINE__), lhs, rexpr)

#define NEBULA_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                  \
  if (!statusor.ok()) return statusor.status();             \
  lhs = std::move(statusor).value()

#endif  // NEBULA_STATUS_MACROS_H_
