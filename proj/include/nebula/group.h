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

#ifndef NEBULA_GROUP_H_
#define NEBULA_GROUP_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "nebula/bytes.h"
#include "nebula/field.h"

namespace nebula {

// Element of the prime-order ristretto255 group, written additively.
// Encodings are canonical and exactly 32 bytes. The identity element is
// never produced by a successful Multiply and is rejected by Decode, since
// no honest protocol message carries it.
class GroupElement {
 public:
  static constexpr size_t kEncodedSize = 32;

  static GroupElement Generator();
  static GroupElement Identity() { return GroupElement(Bytes32{}); }
  // Hash-to-group: SHA-512 of the framed input fed to the ristretto255
  // elligator map (libsodium's crypto_core_ristretto255_from_hash).
  static GroupElement HashToGroup(std::string_view domain,
                                  std::string_view message);
  static absl::StatusOr<GroupElement> Decode(std::string_view bytes);

  // scalar * generator. Fails for a zero scalar.
  static absl::StatusOr<GroupElement> BaseMultiply(const FieldElement& scalar);
  // scalar * this. Fails when the result would be the identity.
  absl::StatusOr<GroupElement> Multiply(const FieldElement& scalar) const;

  // Group addition; may return the identity (used only inside proofs).
  GroupElement operator+(const GroupElement& other) const;

  const Bytes32& bytes() const { return bytes_; }
  std::string Encode() const { return ToString(bytes_); }
  bool IsIdentity() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.bytes_ == b.bytes_;
  }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) {
    return !(a == b);
  }

 private:
  explicit GroupElement(const Bytes32& bytes) : bytes_(bytes) {}

  Bytes32 bytes_;
};

}  // namespace nebula

#endif  // NEBULA_GROUP_H_
