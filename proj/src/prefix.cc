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

#include "nebula/prefix.h"

#include "nebula/bytes.h"
#include "nebula/status_macros.h"

namespace nebula {

absl::StatusOr<std::string> EncodePrefix(
    absl::Span<const std::string> attributes) {
  if (attributes.empty()) return absl::InvalidArgumentError("empty prefix");
  if (attributes.size() == 1) return attributes[0];
  ByteWriter out;
  for (const std::string& a : attributes) {
    if (a.size() > kMaxAttributeLength) {
      return absl::InvalidArgumentError("attribute longer than 65535 bytes");
    }
    out.PutU16(static_cast<uint16_t>(a.size()));
    out.PutBytes(a);
  }
  return out.Release();
}

absl::StatusOr<std::vector<std::string>> DecodePrefix(std::string_view bytes,
                                                      int length) {
  if (length < 1) return absl::InvalidArgumentError("prefix length must be >= 1");
  if (length == 1) return std::vector<std::string>{std::string(bytes)};
  std::vector<std::string> out;
  ByteReader in(bytes);
  for (int i = 0; i < length; ++i) {
    NEBULA_ASSIGN_OR_RETURN(uint16_t len, in.ReadU16());
    NEBULA_ASSIGN_OR_RETURN(std::string_view a, in.ReadBytes(len));
    out.emplace_back(a);
  }
  if (!in.empty()) return absl::InvalidArgumentError("trailing prefix bytes");
  return out;
}

}  // namespace nebula
