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

#include "nebula/field.h"

#include <sodium.h>

#include <cstring>
#include <vector>

namespace nebula {

FieldElement FieldElement::One() { return FromUint64(1); }

FieldElement FieldElement::FromUint64(uint64_t v) {
  Bytes32 b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
  return FieldElement(b);
}

FieldElement FieldElement::FromUniformBytes(
    const std::array<uint8_t, 64>& wide) {
  Bytes32 b;
  crypto_core_ristretto255_scalar_reduce(b.data(), wide.data());
  return FieldElement(b);
}

absl::StatusOr<FieldElement> FieldElement::Decode(std::string_view bytes) {
  if (bytes.size() != kEncodedSize) {
    return absl::InvalidArgumentError("field element must be 32 bytes");
  }
  std::array<uint8_t, 64> wide{};
  std::memcpy(wide.data(), bytes.data(), kEncodedSize);
  FieldElement reduced = FromUniformBytes(wide);
  if (reduced.bytes_ != ToBytes32(bytes)) {
    return absl::InvalidArgumentError("non-canonical field element encoding");
  }
  return reduced;
}

FieldElement FieldElement::Random(SecureRandom& rng) {
  std::array<uint8_t, 64> wide;
  rng.Fill(wide.data(), wide.size());
  return FromUniformBytes(wide);
}

FieldElement FieldElement::RandomNonZero(SecureRandom& rng) {
  FieldElement e;
  do {
    e = Random(rng);
  } while (e.IsZero());
  return e;
}

bool FieldElement::IsZero() const {
  return sodium_is_zero(bytes_.data(), bytes_.size()) == 1;
}

FieldElement FieldElement::operator+(const FieldElement& other) const {
  Bytes32 out;
  crypto_core_ristretto255_scalar_add(out.data(), bytes_.data(),
                                      other.bytes_.data());
  return FieldElement(out);
}

FieldElement FieldElement::operator-(const FieldElement& other) const {
  Bytes32 out;
  crypto_core_ristretto255_scalar_sub(out.data(), bytes_.data(),
                                      other.bytes_.data());
  return FieldElement(out);
}

FieldElement FieldElement::operator*(const FieldElement& other) const {
  Bytes32 out;
  crypto_core_ristretto255_scalar_mul(out.data(), bytes_.data(),
                                      other.bytes_.data());
  return FieldElement(out);
}

FieldElement FieldElement::Negate() const {
  Bytes32 out;
  crypto_core_ristretto255_scalar_negate(out.data(), bytes_.data());
  return FieldElement(out);
}

absl::StatusOr<FieldElement> FieldElement::Inverse() const {
  Bytes32 out;
  if (crypto_core_ristretto255_scalar_invert(out.data(), bytes_.data()) != 0) {
    return absl::InvalidArgumentError("cannot invert zero");
  }
  return FieldElement(out);
}

absl::StatusOr<std::vector<FieldElement>> BatchInverse(
    absl::Span<const FieldElement> elements) {
  const size_t n = elements.size();
  std::vector<FieldElement> prefix(n);
  FieldElement acc = FieldElement::One();
  for (size_t i = 0; i < n; ++i) {
    if (elements[i].IsZero()) {
      return absl::InvalidArgumentError("cannot invert zero");
    }
    prefix[i] = acc;
    acc = acc * elements[i];
  }
  absl::StatusOr<FieldElement> inv = acc.Inverse();
  if (!inv.ok()) return inv.status();
  FieldElement running = *inv;
  std::vector<FieldElement> out(n);
  for (size_t i = n; i-- > 0;) {
    out[i] = running * prefix[i];
    running = running * elements[i];
  }
  return out;
}

}  // namespace nebula
