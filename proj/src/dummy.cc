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

#include "nebula/dummy.h"

#include <sodium.h>

#include <string>

#include "nebula/field.h"
#include "nebula/status_macros.h"

namespace nebula {

absl::StatusOr<std::vector<int>> SampleDummyCounts(const DpParams& params,
                                                   SecureRandom& rng) {
  NEBULA_ASSIGN_OR_RETURN(
      TsdlapDistribution dist,
      TsdlapDistribution::Create(params.tsdlap_scale, params.tsdlap_shift));
  std::vector<int> counts;
  for (int i = 1; i < params.threshold; ++i) counts.push_back(dist.Sample(rng));
  return counts;
}

absl::StatusOr<std::vector<DummyGroup>> PlanDummyGroups(const DpParams& params,
                                                        SecureRandom& rng) {
  NEBULA_ASSIGN_OR_RETURN(std::vector<int> counts,
                          SampleDummyCounts(params, rng));
  std::vector<DummyGroup> groups;
  for (size_t i = 0; i < counts.size(); ++i) {
    for (int c = 0; c < counts[i]; ++c) {
      groups.push_back({rng.NextBytes32(), static_cast<int>(i + 1)});
    }
  }
  return groups;
}

DummyBatch::DummyBatch(std::vector<DummyGroup> groups,
                       std::vector<Submission> submissions)
    : groups_(std::move(groups)), submissions_(std::move(submissions)) {
  for (const DummyGroup& g : groups_) tags_.insert(g.tag);
}

size_t DummyBatch::total_submissions() const {
  size_t total = 0;
  for (const DummyGroup& g : groups_) total += g.multiplicity;
  return total;
}

std::vector<Submission> MakeDummyGroup(const Bytes32& tag, int multiplicity,
                                       size_t value_length,
                                       SecureRandom& rng) {
  Bytes32 key = rng.NextBytes32();
  // Same plaintext shape as a real one: 32 seed bytes, then the value.
  std::string plaintext(32 + value_length, '\0');
  rng.Fill(reinterpret_cast<uint8_t*>(plaintext.data()), 32);
  std::string ciphertext(plaintext.size() + kAeadTagSize, '\0');
  unsigned long long written = 0;
  const unsigned char nonce[crypto_aead_chacha20poly1305_ietf_NPUBBYTES] = {};
  crypto_aead_chacha20poly1305_ietf_encrypt(
      reinterpret_cast<unsigned char*>(ciphertext.data()), &written,
      reinterpret_cast<const unsigned char*>(plaintext.data()),
      plaintext.size(), reinterpret_cast<const unsigned char*>(kValueAssociatedData.data()),
      kValueAssociatedData.size(), nullptr, nonce, key.data());
  ciphertext.resize(written);

  std::vector<Submission> out;
  out.reserve(multiplicity);
  for (int m = 0; m < multiplicity; ++m) {
    out.push_back(Submission{
        tag,
        KeyShare{FieldElement::RandomNonZero(rng), FieldElement::Random(rng)},
        ciphertext});
  }
  return out;
}

absl::StatusOr<DummyBatch> CreateDummyBatch(const DpParams& params,
                                            SecureRandom& rng,
                                            const DummyOptions& options) {
  NEBULA_ASSIGN_OR_RETURN(std::vector<DummyGroup> groups,
                          PlanDummyGroups(params, rng));
  std::vector<Submission> submissions;
  for (const DummyGroup& g : groups) {
    size_t len = 0;
    if (!options.value_lengths.empty()) {
      len = options.value_lengths[rng.UniformInt(options.value_lengths.size())];
    }
    for (Submission& s : MakeDummyGroup(g.tag, g.multiplicity, len, rng)) {
      submissions.push_back(std::move(s));
    }
  }
  return DummyBatch(std::move(groups), std::move(submissions));
}

}  // namespace nebula
