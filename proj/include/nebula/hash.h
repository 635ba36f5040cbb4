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

#ifndef NEBULA_HASH_H_
#define NEBULA_HASH_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

#include "nebula/bytes.h"

namespace nebula {

// Initializes libsodium once per process. Safe to call from any thread.
void InitCrypto();

// Domain-separated random-oracle hashes. The domain string and every part
// are length-framed before hashing, so distinct part lists never collide.
Bytes32 HashToBytes32(std::string_view domain,
                      std::initializer_list<std::string_view> parts);
std::array<uint8_t, 64> HashToBytes64(
    std::string_view domain, std::initializer_list<std::string_view> parts);

// Plain SHA-256 of a byte string (used by the corpus hash-binning rule).
Bytes32 Sha256(std::string_view data);

// Personalization strings. Each random oracle in the protocol gets its own.
namespace domains {
inline constexpr std::string_view kHashToGroup = "nebula/v1/hash-to-group";
inline constexpr std::string_view kOprfOutput = "nebula/v1/oprf-output";
inline constexpr std::string_view kDleqChallenge = "nebula/v1/dleq-challenge";
inline constexpr std::string_view kDleqComposite = "nebula/v1/dleq-composite";
inline constexpr std::string_view kDleqNonce = "nebula/v1/dleq-nonce";
inline constexpr std::string_view kKeygen = "nebula/v1/keygen";
inline constexpr std::string_view kSubRandomness = "nebula/v1/sub-randomness";
inline constexpr std::string_view kSecretEmbedding = "nebula/v1/secret";
inline constexpr std::string_view kSymmetricKey = "nebula/v1/symmetric-key";
inline constexpr std::string_view kPolynomial = "nebula/v1/polynomial";
inline constexpr std::string_view kRngStream = "nebula/v1/rng-stream";
inline constexpr std::string_view kLayerWrap = "nebula/v1/layer-wrap";
}  // namespace domains

}  // namespace nebula

#endif  // NEBULA_HASH_H_
