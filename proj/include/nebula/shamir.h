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

#ifndef NEBULA_SHAMIR_H_
#define NEBULA_SHAMIR_H_

#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "nebula/bytes.h"
#include "nebula/field.h"

namespace nebula {

// One point (x, P(x)) on a sharing polynomial. Carries no client identity:
// x is drawn at random by each client.
struct KeyShare {
  FieldElement x;
  FieldElement y;

  friend bool operator==(const KeyShare& a, const KeyShare& b) {
    return a.x == b.x && a.y == b.y;
  }
};

// Degree-(threshold-1) polynomial with P(0) = secret. Every coefficient
// above the constant term is expanded from a 32-byte seed, so clients
// holding the same (secret, seed) hold the same polynomial.
class SharingPolynomial {
 public:
  // threshold >= 1.
  static SharingPolynomial FromSeed(const FieldElement& secret,
                                    const Bytes32& seed, int threshold);

  FieldElement Evaluate(const FieldElement& x) const;
  const std::vector<FieldElement>& coefficients() const {
    return coefficients_;
  }

 private:
  explicit SharingPolynomial(std::vector<FieldElement> c)
      : coefficients_(std::move(c)) {}

  std::vector<FieldElement> coefficients_;
};

// Lagrange interpolation of the unique polynomial of degree < shares.size()
// through the shares, evaluated at zero. Fails on an empty list, a zero
// x-coordinate, or repeated x-coordinates.
absl::StatusOr<FieldElement> InterpolateAtZero(absl::Span<const KeyShare> shares);

}  // namespace nebula

#endif  // NEBULA_SHAMIR_H_
