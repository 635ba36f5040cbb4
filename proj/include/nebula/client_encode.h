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

// Client-side encoding of one value into a tagged, secret-shared submission.
//
// From the OPRF output r the client derives r1 (key seed), r2 (polynomial
// seed) and r3 (tag). r1 is embedded in the field as s = HashToField(r1);
// the AEAD key is derived from s, so anyone who interpolates s from
// threshold-many shares can decrypt. The plaintext is r1 || value, which
// lets the decoder check that the recovered s really came from r1.
//
// Submission wire layout (version 1, all integers big-endian):
//
//   offset  size  field
//   0       32    tag (r3)
//   32      32    share x-coordinate (canonical field encoding)
//   64      32    share y-coordinate (canonical field encoding)
//   96      2     ciphertext length L
//   98      L     ciphertext = ChaCha20-Poly1305(key, nonce = 0^12,
//                                 ad = "nebula/v1/value", r1 || value)
//
// L = 32 + |value| + 16, so a submission is 146 + |value| bytes.

#ifndef NEBULA_CLIENT_ENCODE_H_
#define NEBULA_CLIENT_ENCODE_H_

#include <cstddef>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "nebula/bytes.h"
#include "nebula/dp_params.h"
#include "nebula/field.h"
#include "nebula/random.h"
#include "nebula/shamir.h"

namespace nebula {

inline constexpr size_t kDefaultMaxValueLength = 256;
inline constexpr size_t kAeadKeySize = 32;
inline constexpr size_t kAeadTagSize = 16;
inline constexpr size_t kCiphertextOverhead = 32 + kAeadTagSize;
inline constexpr size_t kSubmissionFixedSize = 32 + 32 + 32 + 2;
inline constexpr std::string_view kValueAssociatedData = "nebula/v1/value";

struct SubRandomness {
  Bytes32 key_seed;    // r1
  Bytes32 share_seed;  // r2
  Bytes32 tag;         // r3
};

// r_i = H(r || i) under a dedicated domain.
SubRandomness ParseRandomness(const Bytes32& r);

// Field embedding of r1; the constant term of the sharing polynomial.
FieldElement SecretFromKeySeed(const Bytes32& key_seed);
// Symmetric key derived from the shared secret.
Bytes32 DeriveSymmetricKey(const FieldElement& secret);

// Share of r1's embedding on the polynomial seeded by r2, at a fresh random
// nonzero x-coordinate. threshold >= 1.
absl::StatusOr<KeyShare> MakeShare(const Bytes32& key_seed,
                                   const Bytes32& share_seed, int threshold,
                                   SecureRandom& rng);

// Deterministic: equal (r1, value) give byte-identical ciphertexts.
absl::StatusOr<std::string> EncryptValue(
    const Bytes32& key_seed, std::string_view value,
    size_t max_value_length = kDefaultMaxValueLength);

// Server-side decryption with the interpolated secret. Fails if the AEAD
// tag does not authenticate or the embedded r1 does not map to `secret`.
absl::StatusOr<std::string> DecryptValue(const FieldElement& secret,
                                         std::string_view ciphertext);

// Bernoulli participation test: true with probability p.
bool Participate(double p, SecureRandom& rng);

struct Submission {
  Bytes32 tag;
  KeyShare share;
  std::string ciphertext;

  size_t SerializedSize() const {
    return kSubmissionFixedSize + ciphertext.size();
  }
  std::string Serialize() const;
  void AppendTo(ByteWriter& out) const;
  // Requires the buffer to contain exactly one submission.
  static absl::StatusOr<Submission> Parse(std::string_view bytes);
  // Reads one submission and leaves the reader after it.
  static absl::StatusOr<Submission> ReadFrom(ByteReader& in);

  friend bool operator==(const Submission& a, const Submission& b) {
    return a.tag == b.tag && a.share == b.share &&
           a.ciphertext == b.ciphertext;
  }
};

// Everything about a value's encoding that is a pure function of
// (value, r, threshold). Encode() only draws a fresh share point, so one
// encoder can produce submissions for many clients holding the same value.
class ValueEncoder {
 public:
  static absl::StatusOr<ValueEncoder> Create(
      std::string_view value, const Bytes32& r, int threshold,
      size_t max_value_length = kDefaultMaxValueLength);

  Submission Encode(SecureRandom& rng) const;

  const Bytes32& tag() const { return tag_; }
  const Bytes32& key() const { return key_; }
  const FieldElement& secret() const { return polynomial_.coefficients()[0]; }
  const std::string& ciphertext() const { return ciphertext_; }

 private:
  ValueEncoder(Bytes32 tag, Bytes32 key, std::string ciphertext,
               SharingPolynomial polynomial)
      : tag_(tag),
        key_(key),
        ciphertext_(std::move(ciphertext)),
        polynomial_(std::move(polynomial)) {}

  Bytes32 tag_;
  Bytes32 key_;
  std::string ciphertext_;
  SharingPolynomial polynomial_;
};

// Encodes x with OPRF output r under params.threshold.
absl::StatusOr<Submission> BuildSubmission(std::string_view x,
                                           const Bytes32& r,
                                           const DpParams& params,
                                           SecureRandom& rng);

}  // namespace nebula

#endif  // NEBULA_CLIENT_ENCODE_H_
