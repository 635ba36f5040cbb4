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

#ifndef NEBULA_FIELD_H_
#define NEBULA_FIELD_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "nebula/bytes.h"
#include "nebula/random.h"

namespace nebula {

// Element of the prime field of order
//   l = 2^252 + 27742317777372353535851937790883648493,
// the scalar field of the ristretto255 group. Serves both as the exponent
// group for the OPRF and as the field for Shamir sharing. Canonical
// encoding is 32 bytes little-endian, fully reduced.
class FieldElement {
 public:
  static constexpr size_t kEncodedSize = 32;

  // Zero.
  FieldElement() : bytes_{} {}

  static FieldElement One();
  static FieldElement FromUint64(uint64_t v);
  // Reduces 64 uniform bytes modulo l; the result is statistically uniform.
  static FieldElement FromUniformBytes(const std::array<uint8_t, 64>& wide);
  // Rejects non-canonical (unreduced) encodings.
  static absl::StatusOr<FieldElement> Decode(std::string_view bytes);

  static FieldElement Random(SecureRandom& rng);
  static FieldElement RandomNonZero(SecureRandom& rng);

  const Bytes32& bytes() const { return bytes_; }
  std::string Encode() const { return ToString(bytes_); }
  bool IsZero() const;

  FieldElement operator+(const FieldElement& other) const;
  FieldElement operator-(const FieldElement& other) const;
  FieldElement operator*(const FieldElement& other) const;
  FieldElement Negate() const;
  // Fails for zero.
  absl::StatusOr<FieldElement> Inverse() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.bytes_ == b.bytes_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) {
    return !(a == b);
  }

 private:
  explicit FieldElement(const Bytes32& bytes) : bytes_(bytes) {}

  Bytes32 bytes_;
};

// Inverts every element with a single field inversion (Montgomery's trick).
// Fails if any element is zero.
absl::StatusOr<std::vector<FieldElement>> BatchInverse(
    absl::Span<const FieldElement> elements);

}  // namespace nebula

#endif  // NEBULA_FIELD_H_
