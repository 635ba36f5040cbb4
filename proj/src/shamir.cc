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

#include "nebula/shamir.h"

#include <sodium.h>

#include <array>
#include <cstring>

#include "nebula/hash.h"
#include "nebula/status_macros.h"

namespace nebula {

SharingPolynomial SharingPolynomial::FromSeed(const FieldElement& secret,
                                              const Bytes32& seed,
                                              int threshold) {
  std::vector<FieldElement> c;
  c.reserve(threshold);
  c.push_back(secret);
  if (threshold > 1) {
    // ChaCha20 keystream under a key derived from the seed; 64 bytes per
    // coefficient, reduced mod l.
    Bytes32 key = HashToBytes32(domains::kPolynomial, {AsStringView(seed)});
    std::vector<uint8_t> stream(64 * static_cast<size_t>(threshold - 1));
    uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {};
    crypto_stream_chacha20(stream.data(), stream.size(), nonce, key.data());
    std::array<uint8_t, 64> wide;
    for (int i = 1; i < threshold; ++i) {
      std::memcpy(wide.data(), stream.data() + 64 * (i - 1), 64);
      c.push_back(FieldElement::FromUniformBytes(wide));
    }
  }
  return SharingPolynomial(std::move(c));
}

FieldElement SharingPolynomial::Evaluate(const FieldElement& x) const {
  FieldElement acc;
  for (size_t i = coefficients_.size(); i-- > 0;) {
    acc = acc * x + coefficients_[i];
  }
  return acc;
}

absl::StatusOr<FieldElement> InterpolateAtZero(
    absl::Span<const KeyShare> shares) {
  const size_t n = shares.size();
  if (n == 0) return absl::InvalidArgumentError("no shares to interpolate");
  // L_j(0) = prod_{m != j} x_m / (x_m - x_j).
  std::vector<FieldElement> denominators(n, FieldElement::One());
  FieldElement all_x = FieldElement::One();
  for (size_t j = 0; j < n; ++j) {
    if (shares[j].x.IsZero()) {
      return absl::InvalidArgumentError("share with zero x-coordinate");
    }
    all_x = all_x * shares[j].x;
    for (size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      FieldElement diff = shares[m].x - shares[j].x;
      if (diff.IsZero()) {
        return absl::InvalidArgumentError("duplicate share x-coordinates");
      }
      denominators[j] = denominators[j] * diff;
    }
    // Fold x_j into the denominator so that all_x / denom = prod_{m!=j} x_m.
    denominators[j] = denominators[j] * shares[j].x;
  }
  NEBULA_ASSIGN_OR_RETURN(std::vector<FieldElement> inverses,
                          BatchInverse(denominators));
  FieldElement result;
  for (size_t j = 0; j < n; ++j) {
    result = result + shares[j].y * (all_x * inverses[j]);
  }
  return result;
}

}  // namespace nebula
