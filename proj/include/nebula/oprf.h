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

// Verifiable oblivious PRF over ristretto255.
//
// Client:  b = r' * HashToGroup(x)            (Blind)
// Server:  z = msk * b, plus a DLEQ proof     (Evaluate)
// Client:  verify proof, w = (1/r') * z,
//          r = H2(w || x)                      (Finalize)
//
// The proof is a Chaum-Pedersen discrete-log-equality proof made
// non-interactive with Fiat-Shamir. A batch of up to kMaxBatchSize elements
// shares one proof over random linear combinations of the inputs and
// outputs. Every hash uses its own personalization string.

#ifndef NEBULA_OPRF_H_
#define NEBULA_OPRF_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "nebula/bytes.h"
#include "nebula/field.h"
#include "nebula/group.h"
#include "nebula/random.h"

namespace nebula {

inline constexpr size_t kMaxOprfBatchSize = 8;

struct ServerKeypair {
  FieldElement secret_key;
  GroupElement public_key;

  // Deterministic in the seed.
  static ServerKeypair FromSeed(const Bytes32& seed);
};

struct DleqProof {
  static constexpr size_t kEncodedSize = 64;

  FieldElement challenge;
  FieldElement response;

  // challenge || response.
  std::string Encode() const;
  static absl::StatusOr<DleqProof> Decode(std::string_view bytes);
};

// Client-side state for one input: the blinded element is sent to the
// server, the blinding scalar never leaves the client.
struct BlindedInput {
  std::string input;
  FieldElement blind;
  GroupElement element;
};

struct Evaluation {
  std::vector<GroupElement> elements;
  DleqProof proof;
};

// Fails on empty input.
absl::StatusOr<BlindedInput> Blind(std::string_view input, SecureRandom& rng);
// Blind with a caller-chosen nonzero scalar. Exposed for tests.
absl::StatusOr<BlindedInput> BlindWithScalar(std::string_view input,
                                             const FieldElement& blind);

// Server evaluation of 1..kMaxOprfBatchSize blinded elements. Pure function
// of (blinded, keypair): the proof nonce is derived deterministically.
absl::StatusOr<Evaluation> Evaluate(absl::Span<const GroupElement> blinded,
                                    const ServerKeypair& keypair);

absl::Status VerifyEvaluation(absl::Span<const GroupElement> blinded,
                              const Evaluation& evaluation,
                              const GroupElement& public_key);

// Verifies the proof, unblinds and hashes. On any verification failure the
// client must abort and never use an output.
absl::StatusOr<std::vector<Bytes32>> Finalize(
    absl::Span<const BlindedInput> inputs, const Evaluation& evaluation,
    const GroupElement& public_key);
absl::StatusOr<Bytes32> Finalize(const BlindedInput& input,
                                 const Evaluation& evaluation,
                                 const GroupElement& public_key);

// Same as Finalize but skips proof verification. Benchmarks only.
absl::StatusOr<std::vector<Bytes32>> FinalizeWithoutVerification(
    absl::Span<const BlindedInput> inputs, const Evaluation& evaluation);

// H2(msk * HashToGroup(x) || x): the PRF value computed directly with the
// secret key, without blinding. Reference for tests and for the server-side
// view of the function.
Bytes32 EvaluateUnblinded(std::string_view input,
                          const FieldElement& secret_key);

// The party a client talks to for randomness: either an in-process keypair
// or a remote randomness server.
class RandomnessService {
 public:
  virtual ~RandomnessService() = default;
  virtual absl::StatusOr<Evaluation> Evaluate(
      absl::Span<const GroupElement> blinded) = 0;
  virtual absl::StatusOr<GroupElement> PublicKey() = 0;
};

class LocalRandomnessService : public RandomnessService {
 public:
  explicit LocalRandomnessService(ServerKeypair keypair)
      : keypair_(std::move(keypair)) {}

  absl::StatusOr<Evaluation> Evaluate(
      absl::Span<const GroupElement> blinded) override;
  absl::StatusOr<GroupElement> PublicKey() override {
    return keypair_.public_key;
  }

 private:
  ServerKeypair keypair_;
};

// Runs the full client protocol for each input, in batches of at most
// kMaxOprfBatchSize, verifying every proof.
absl::StatusOr<std::vector<Bytes32>> ObtainRandomness(
    RandomnessService& service, absl::Span<const std::string> inputs,
    SecureRandom& rng);

}  // namespace nebula

#endif  // NEBULA_OPRF_H_
