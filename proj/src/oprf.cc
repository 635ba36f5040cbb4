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

#include "nebula/oprf.h"

#include <algorithm>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "nebula/hash.h"
#include "nebula/status_macros.h"

namespace nebula {

namespace {

// scalar * point, with the identity standing in for the degenerate cases
// that only occur inside proof verification.
GroupElement MultiplyOrIdentity(const GroupElement& point,
                                const FieldElement& scalar) {
  if (scalar.IsZero() || point.IsIdentity()) return GroupElement::Identity();
  absl::StatusOr<GroupElement> r = point.Multiply(scalar);
  return r.ok() ? *r : GroupElement::Identity();
}

FieldElement HashToScalar(std::string_view domain,
                          std::initializer_list<std::string_view> parts) {
  return FieldElement::FromUniformBytes(HashToBytes64(domain, parts));
}

struct Composites {
  GroupElement blinded_sum;
  GroupElement evaluated_sum;
};

// Pseudorandom weights d_i bound to the whole transcript; a prover who
// cheats on any single element fails the combined check except with
// probability about 1/l.
std::vector<FieldElement> CompositeWeights(
    const GroupElement& public_key, absl::Span<const GroupElement> blinded,
    absl::Span<const GroupElement> evaluated) {
  std::string transcript;
  transcript.reserve(32 * (1 + 2 * blinded.size()));
  transcript.append(AsStringView(public_key.bytes()));
  for (const GroupElement& b : blinded) transcript.append(AsStringView(b.bytes()));
  for (const GroupElement& z : evaluated) {
    transcript.append(AsStringView(z.bytes()));
  }
  Bytes32 seed = HashToBytes32(domains::kDleqComposite, {transcript});
  std::vector<FieldElement> weights;
  weights.reserve(blinded.size());
  for (size_t i = 0; i < blinded.size(); ++i) {
    char index = static_cast<char>(i);
    weights.push_back(HashToScalar(domains::kDleqComposite,
                                   {AsStringView(seed), std::string_view(&index, 1)}));
  }
  return weights;
}

Composites ComputeComposites(const GroupElement& public_key,
                             absl::Span<const GroupElement> blinded,
                             absl::Span<const GroupElement> evaluated) {
  std::vector<FieldElement> weights =
      CompositeWeights(public_key, blinded, evaluated);
  GroupElement m = GroupElement::Identity();
  GroupElement z = GroupElement::Identity();
  for (size_t i = 0; i < blinded.size(); ++i) {
    m = m + MultiplyOrIdentity(blinded[i], weights[i]);
    z = z + MultiplyOrIdentity(evaluated[i], weights[i]);
  }
  return {m, z};
}

FieldElement Challenge(const GroupElement& public_key, const GroupElement& m,
                       const GroupElement& z, const GroupElement& t2,
                       const GroupElement& t3) {
  return HashToScalar(
      domains::kDleqChallenge,
      {AsStringView(GroupElement::Generator().bytes()),
       AsStringView(public_key.bytes()), AsStringView(m.bytes()),
       AsStringView(z.bytes()), AsStringView(t2.bytes()),
       AsStringView(t3.bytes())});
}

absl::Status CheckBatchSize(size_t n) {
  if (n == 0 || n > kMaxOprfBatchSize) {
    return absl::InvalidArgumentError(
        absl::StrCat("OPRF batch size must be in [1, ", kMaxOprfBatchSize,
                     "], got ", n));
  }
  return absl::OkStatus();
}

Bytes32 OutputHash(const GroupElement& unblinded, std::string_view input) {
  return HashToBytes32(domains::kOprfOutput,
                       {AsStringView(unblinded.bytes()), input});
}

absl::StatusOr<std::vector<Bytes32>> Unblind(
    absl::Span<const BlindedInput> inputs, const Evaluation& evaluation) {
  if (inputs.size() != evaluation.elements.size()) {
    return absl::InvalidArgumentError("evaluation count mismatch");
  }
  std::vector<FieldElement> blinds;
  blinds.reserve(inputs.size());
  for (const BlindedInput& in : inputs) blinds.push_back(in.blind);
  NEBULA_ASSIGN_OR_RETURN(std::vector<FieldElement> inverses,
                          BatchInverse(blinds));
  std::vector<Bytes32> out;
  out.reserve(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    NEBULA_ASSIGN_OR_RETURN(GroupElement w,
                            evaluation.elements[i].Multiply(inverses[i]));
    out.push_back(OutputHash(w, inputs[i].input));
  }
  return out;
}

}  // namespace

ServerKeypair ServerKeypair::FromSeed(const Bytes32& seed) {
  FieldElement sk = HashToScalar(domains::kKeygen, {AsStringView(seed)});
  // A zero key has probability ~2^-252; rehash rather than fail.
  for (uint8_t counter = 0; sk.IsZero(); ++counter) {
    char c = static_cast<char>(counter);
    sk = HashToScalar(domains::kKeygen,
                      {AsStringView(seed), std::string_view(&c, 1)});
  }
  return {sk, *GroupElement::BaseMultiply(sk)};
}

std::string DleqProof::Encode() const {
  return challenge.Encode() + response.Encode();
}

absl::StatusOr<DleqProof> DleqProof::Decode(std::string_view bytes) {
  if (bytes.size() != kEncodedSize) {
    return absl::InvalidArgumentError("DLEQ proof must be 64 bytes");
  }
  NEBULA_ASSIGN_OR_RETURN(FieldElement c, FieldElement::Decode(bytes.substr(0, 32)));
  NEBULA_ASSIGN_OR_RETURN(FieldElement s, FieldElement::Decode(bytes.substr(32)));
  return DleqProof{c, s};
}

absl::StatusOr<BlindedInput> BlindWithScalar(std::string_view input,
                                             const FieldElement& blind) {
  if (input.empty()) {
    return absl::InvalidArgumentError("OPRF input must be non-empty");
  }
  if (blind.IsZero()) {
    return absl::InvalidArgumentError("blinding scalar must be nonzero");
  }
  GroupElement h = GroupElement::HashToGroup(domains::kHashToGroup, input);
  NEBULA_ASSIGN_OR_RETURN(GroupElement b, h.Multiply(blind));
  return BlindedInput{std::string(input), blind, b};
}

absl::StatusOr<BlindedInput> Blind(std::string_view input, SecureRandom& rng) {
  return BlindWithScalar(input, FieldElement::RandomNonZero(rng));
}

absl::StatusOr<Evaluation> Evaluate(absl::Span<const GroupElement> blinded,
                                    const ServerKeypair& keypair) {
  NEBULA_RETURN_IF_ERROR(CheckBatchSize(blinded.size()));
  Evaluation ev;
  ev.elements.reserve(blinded.size());
  for (const GroupElement& b : blinded) {
    if (b.IsIdentity()) {
      return absl::InvalidArgumentError("blinded element is the identity");
    }
    NEBULA_ASSIGN_OR_RETURN(GroupElement z, b.Multiply(keypair.secret_key));
    ev.elements.push_back(z);
  }

  Composites comp = ComputeComposites(keypair.public_key, blinded, ev.elements);
  FieldElement nonce = HashToScalar(
      domains::kDleqNonce,
      {AsStringView(keypair.secret_key.bytes()),
       AsStringView(comp.blinded_sum.bytes()),
       AsStringView(comp.evaluated_sum.bytes())});
  if (nonce.IsZero()) nonce = FieldElement::One();
  NEBULA_ASSIGN_OR_RETURN(GroupElement t2, GroupElement::BaseMultiply(nonce));
  GroupElement t3 = MultiplyOrIdentity(comp.blinded_sum, nonce);
  FieldElement c = Challenge(keypair.public_key, comp.blinded_sum,
                             comp.evaluated_sum, t2, t3);
  ev.proof = DleqProof{c, nonce - c * keypair.secret_key};
  return ev;
}

absl::Status VerifyEvaluation(absl::Span<const GroupElement> blinded,
                              const Evaluation& evaluation,
                              const GroupElement& public_key) {
  NEBULA_RETURN_IF_ERROR(CheckBatchSize(blinded.size()));
  if (evaluation.elements.size() != blinded.size()) {
    return absl::InvalidArgumentError("evaluation count mismatch");
  }
  Composites comp =
      ComputeComposites(public_key, blinded, evaluation.elements);
  const FieldElement& c = evaluation.proof.challenge;
  const FieldElement& s = evaluation.proof.response;
  GroupElement t2 = MultiplyOrIdentity(GroupElement::Generator(), s) +
                    MultiplyOrIdentity(public_key, c);
  GroupElement t3 = MultiplyOrIdentity(comp.blinded_sum, s) +
                    MultiplyOrIdentity(comp.evaluated_sum, c);
  if (Challenge(public_key, comp.blinded_sum, comp.evaluated_sum, t2, t3) !=
      c) {
    return absl::PermissionDeniedError("DLEQ proof verification failed");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<Bytes32>> Finalize(
    absl::Span<const BlindedInput> inputs, const Evaluation& evaluation,
    const GroupElement& public_key) {
  std::vector<GroupElement> blinded;
  blinded.reserve(inputs.size());
  for (const BlindedInput& in : inputs) blinded.push_back(in.element);
  NEBULA_RETURN_IF_ERROR(VerifyEvaluation(blinded, evaluation, public_key));
  return Unblind(inputs, evaluation);
}

absl::StatusOr<Bytes32> Finalize(const BlindedInput& input,
                                 const Evaluation& evaluation,
                                 const GroupElement& public_key) {
  NEBULA_ASSIGN_OR_RETURN(
      std::vector<Bytes32> out,
      Finalize(absl::MakeConstSpan(&input, 1), evaluation, public_key));
  return out.front();
}

absl::StatusOr<std::vector<Bytes32>> FinalizeWithoutVerification(
    absl::Span<const BlindedInput> inputs, const Evaluation& evaluation) {
  return Unblind(inputs, evaluation);
}

Bytes32 EvaluateUnblinded(std::string_view input,
                          const FieldElement& secret_key) {
  GroupElement h = GroupElement::HashToGroup(domains::kHashToGroup, input);
  return OutputHash(MultiplyOrIdentity(h, secret_key), input);
}

absl::StatusOr<Evaluation> LocalRandomnessService::Evaluate(
    absl::Span<const GroupElement> blinded) {
  return nebula::Evaluate(blinded, keypair_);
}

absl::StatusOr<std::vector<Bytes32>> ObtainRandomness(
    RandomnessService& service, absl::Span<const std::string> inputs,
    SecureRandom& rng) {
  NEBULA_ASSIGN_OR_RETURN(GroupElement public_key, service.PublicKey());
  std::vector<Bytes32> out;
  out.reserve(inputs.size());
  for (size_t start = 0; start < inputs.size(); start += kMaxOprfBatchSize) {
    size_t end = std::min(inputs.size(), start + kMaxOprfBatchSize);
    std::vector<BlindedInput> blinded;
    std::vector<GroupElement> elements;
    for (size_t i = start; i < end; ++i) {
      NEBULA_ASSIGN_OR_RETURN(BlindedInput b, Blind(inputs[i], rng));
      elements.push_back(b.element);
      blinded.push_back(std::move(b));
    }
    NEBULA_ASSIGN_OR_RETURN(Evaluation ev, service.Evaluate(elements));
    NEBULA_ASSIGN_OR_RETURN(std::vector<Bytes32> r,
                            Finalize(blinded, ev, public_key));
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace nebula
