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

// Canonical byte encoding of an attribute prefix [x_1, ..., x_i].
//
// A one-attribute prefix is x_1 itself, so single-attribute and layer-1
// multidim values coincide. Longer prefixes are the concatenation of
// u16-length-prefixed attributes, which is prefix-free.

#ifndef NEBULA_PREFIX_H_
#define NEBULA_PREFIX_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace nebula {

inline constexpr size_t kMaxAttributeLength = 0xffff;

// attributes must be non-empty with every element shorter than 64 KiB.
absl::StatusOr<std::string> EncodePrefix(
    absl::Span<const std::string> attributes);

// Inverse of EncodePrefix for a prefix of `length` attributes.
absl::StatusOr<std::vector<std::string>> DecodePrefix(std::string_view bytes,
                                                      int length);

}  // namespace nebula

#endif  // NEBULA_PREFIX_H_
