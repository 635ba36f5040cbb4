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

#include "nebula/group.h"

#include <sodium.h>

#include "nebula/hash.h"

namespace nebula {

GroupElement GroupElement::Generator() {
  static const GroupElement* const kGenerator = [] {
    Bytes32 out;
    FieldElement one = FieldElement::One();
    crypto_scalarmult_ristretto255_base(out.data(), one.bytes().data());
    return new GroupElement(out);
  }();
  return *kGenerator;
}

GroupElement GroupElement::HashToGroup(std::string_view domain,
                                       std::string_view message) {
  std::array<uint8_t, 64> wide = HashToBytes64(domain, {message});
  Bytes32 out;
  crypto_core_ristretto255_from_hash(out.data(), wide.data());
  return GroupElement(out);
}

absl::StatusOr<GroupElement> GroupElement::Decode(std::string_view bytes) {
  if (bytes.size() != kEncodedSize) {
    return absl::InvalidArgumentError("group element must be 32 bytes");
  }
  Bytes32 b = ToBytes32(bytes);
  if (crypto_core_ristretto255_is_valid_point(b.data()) != 1) {
    return absl::InvalidArgumentError("invalid ristretto255 encoding");
  }
  GroupElement e(b);
  if (e.IsIdentity()) {
    return absl::InvalidArgumentError("identity element not allowed");
  }
  return e;
}

absl::StatusOr<GroupElement> GroupElement::BaseMultiply(
    const FieldElement& scalar) {
  Bytes32 out;
  if (crypto_scalarmult_ristretto255_base(out.data(), scalar.bytes().data()) !=
      0) {
    return absl::InvalidArgumentError("scalar multiplication gave identity");
  }
  return GroupElement(out);
}

absl::StatusOr<GroupElement> GroupElement::Multiply(
    const FieldElement& scalar) const {
  Bytes32 out;
  if (crypto_scalarmult_ristretto255(out.data(), scalar.bytes().data(),
                                     bytes_.data()) != 0) {
    return absl::InvalidArgumentError("scalar multiplication gave identity");
  }
  return GroupElement(out);
}

GroupElement GroupElement::operator+(const GroupElement& other) const {
  Bytes32 out;
  crypto_core_ristretto255_add(out.data(), bytes_.data(), other.bytes_.data());
  return GroupElement(out);
}

bool GroupElement::IsIdentity() const {
  return sodium_is_zero(bytes_.data(), bytes_.size()) == 1;
}

}  // namespace nebula
