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

#include "nebula/multidim.h"

#include <sodium.h>

#include <algorithm>
#include <unordered_map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "nebula/hash.h"
#include "nebula/prefix.h"
#include "nebula/status_macros.h"

namespace nebula {

namespace {

constexpr std::string_view kLayerAd = "nebula/v1/layer";

std::string LayerAd(int layer) {
  std::string ad(kLayerAd);
  ad.push_back(static_cast<char>(layer));
  return ad;
}

}  // namespace

absl::StatusOr<PrefixChain> MakePrefixes(std::vector<std::string> attributes,
                                         int max_attributes) {
  if (attributes.empty()) return absl::InvalidArgumentError("no attributes");
  if (static_cast<int>(attributes.size()) > max_attributes) {
    return absl::InvalidArgumentError(absl::StrCat(
        attributes.size(), " attributes exceed the maximum of ",
        max_attributes));
  }
  PrefixChain chain;
  chain.attributes = std::move(attributes);
  absl::Span<const std::string> all(chain.attributes);
  for (size_t i = 1; i <= all.size(); ++i) {
    NEBULA_ASSIGN_OR_RETURN(std::string p, EncodePrefix(all.subspan(0, i)));
    chain.prefixes.push_back(std::move(p));
  }
  return chain;
}

size_t SuperSubmission::SerializedSize() const {
  size_t n = 1 + layer1.SerializedSize();
  for (const std::string& b : wrapped_layers) n += 2 + b.size();
  return n;
}

void SuperSubmission::AppendTo(ByteWriter& out) const {
  out.PutU8(static_cast<uint8_t>(layer_count()));
  layer1.AppendTo(out);
  for (const std::string& b : wrapped_layers) {
    out.PutU16(static_cast<uint16_t>(b.size()));
    out.PutBytes(b);
  }
}

std::string SuperSubmission::Serialize() const {
  ByteWriter out(SerializedSize());
  AppendTo(out);
  return out.Release();
}

absl::StatusOr<SuperSubmission> SuperSubmission::ReadFrom(ByteReader& in) {
  NEBULA_ASSIGN_OR_RETURN(uint8_t count, in.ReadU8());
  if (count < 1 || count > kMaxAttributes) {
    return absl::InvalidArgumentError("layer count out of range");
  }
  SuperSubmission s;
  NEBULA_ASSIGN_OR_RETURN(s.layer1, Submission::ReadFrom(in));
  for (int i = 1; i < count; ++i) {
    NEBULA_ASSIGN_OR_RETURN(uint16_t len, in.ReadU16());
    NEBULA_ASSIGN_OR_RETURN(std::string_view blob, in.ReadBytes(len));
    s.wrapped_layers.emplace_back(blob);
  }
  return s;
}

absl::StatusOr<SuperSubmission> SuperSubmission::Parse(std::string_view bytes) {
  ByteReader in(bytes);
  NEBULA_ASSIGN_OR_RETURN(SuperSubmission s, ReadFrom(in));
  if (!in.empty()) {
    return absl::InvalidArgumentError("trailing bytes after super-submission");
  }
  return s;
}

Bytes32 LayerWrapKey(const Bytes32& parent_value_key) {
  return HashToBytes32(domains::kLayerWrap, {AsStringView(parent_value_key)});
}

std::string WrapLayer(const Bytes32& parent_value_key, int layer,
                      const Submission& inner, SecureRandom& rng) {
  Bytes32 key = LayerWrapKey(parent_value_key);
  std::string plaintext = inner.Serialize();
  std::string ad = LayerAd(layer);
  std::string blob(kWrapNonceSize + plaintext.size() + kAeadTagSize, '\0');
  auto* nonce = reinterpret_cast<unsigned char*>(blob.data());
  rng.Fill(nonce, kWrapNonceSize);
  unsigned long long written = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(
      nonce + kWrapNonceSize, &written,
      reinterpret_cast<const unsigned char*>(plaintext.data()),
      plaintext.size(), reinterpret_cast<const unsigned char*>(ad.data()),
      ad.size(), nullptr, nonce, key.data());
  blob.resize(kWrapNonceSize + written);
  return blob;
}

absl::StatusOr<Submission> UnwrapLayer(const Bytes32& parent_value_key,
                                       int layer, std::string_view blob) {
  if (blob.size() < kWrapOverhead) {
    return absl::InvalidArgumentError("wrapped layer too short");
  }
  Bytes32 key = LayerWrapKey(parent_value_key);
  std::string ad = LayerAd(layer);
  std::string plaintext(blob.size() - kWrapOverhead, '\0');
  unsigned long long written = 0;
  const auto* nonce = reinterpret_cast<const unsigned char*>(blob.data());
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(
          reinterpret_cast<unsigned char*>(plaintext.data()), &written,
          nullptr, nonce + kWrapNonceSize, blob.size() - kWrapNonceSize,
          reinterpret_cast<const unsigned char*>(ad.data()), ad.size(),
          nonce, key.data()) != 0) {
    return absl::DataLossError("wrapped layer failed authentication");
  }
  plaintext.resize(written);
  return Submission::Parse(plaintext);
}

SuperSubmission EncodeMultidimWith(
    absl::Span<const ValueEncoder* const> encoders, SecureRandom& rng) {
  SuperSubmission out;
  out.layer1 = encoders[0]->Encode(rng);
  for (size_t i = 1; i < encoders.size(); ++i) {
    out.wrapped_layers.push_back(
        WrapLayer(encoders[i - 1]->key(), static_cast<int>(i + 1),
                  encoders[i]->Encode(rng), rng));
  }
  return out;
}

absl::StatusOr<SuperSubmission> EncodeMultidim(
    absl::Span<const std::string> attributes,
    absl::Span<const Bytes32> randomness, const DpParams& params,
    SecureRandom& rng) {
  NEBULA_ASSIGN_OR_RETURN(
      PrefixChain chain,
      MakePrefixes(std::vector<std::string>(attributes.begin(),
                                            attributes.end())));
  if (randomness.size() != chain.prefixes.size()) {
    return absl::InvalidArgumentError("need one OPRF output per prefix");
  }
  std::vector<ValueEncoder> encoders;
  for (size_t i = 0; i < chain.prefixes.size(); ++i) {
    NEBULA_ASSIGN_OR_RETURN(
        ValueEncoder e, ValueEncoder::Create(chain.prefixes[i], randomness[i],
                                             params.threshold,
                                             kMaxPrefixLength));
    encoders.push_back(std::move(e));
  }
  std::vector<const ValueEncoder*> ptrs;
  for (const ValueEncoder& e : encoders) ptrs.push_back(&e);
  return EncodeMultidimWith(ptrs, rng);
}

absl::StatusOr<std::vector<SuperSubmission>> CreateDummySuperSubmissions(
    const DpParams& params, SecureRandom& rng, int layer_count,
    const DummyOptions& options,
    absl::Span<const std::vector<size_t>> inner_value_lengths) {
  if (layer_count < 1 || layer_count > kMaxAttributes) {
    return absl::InvalidArgumentError("layer count out of range");
  }
  NEBULA_ASSIGN_OR_RETURN(DummyBatch batch,
                          CreateDummyBatch(params, rng, options));
  std::vector<SuperSubmission> out;
  out.reserve(batch.submissions().size());
  for (Submission& s : batch.ReleaseSubmissions()) {
    SuperSubmission super;
    super.layer1 = std::move(s);
    for (int layer = 2; layer <= layer_count; ++layer) {
      size_t value_len = 0;
      size_t j = static_cast<size_t>(layer - 2);
      if (j < inner_value_lengths.size() && !inner_value_lengths[j].empty()) {
        const std::vector<size_t>& c = inner_value_lengths[j];
        value_len = c[rng.UniformInt(c.size())];
      }
      std::string blob(kWrapOverhead + kSubmissionFixedSize +
                           kCiphertextOverhead + value_len,
                       '\0');
      rng.Fill(reinterpret_cast<uint8_t*>(blob.data()), blob.size());
      super.wrapped_layers.push_back(std::move(blob));
    }
    out.push_back(std::move(super));
  }
  return out;
}

std::vector<HistogramReport> DecodeMultidim(
    std::vector<SuperSubmission> submissions, const DpParams& params) {
  int layers = 1;
  for (const SuperSubmission& s : submissions) {
    layers = std::max(layers, s.layer_count());
  }
  std::vector<HistogramReport> reports(layers);
  for (int i = 0; i < layers; ++i) {
    reports[i].layer = i + 1;
    reports[i].dummy_noise = i == 0;
    reports[i].params = params;
  }

  // Live members of the current layer: owning super-submission and the
  // opened submission for this layer.
  std::vector<size_t> owners(submissions.size());
  std::vector<Submission> current;
  current.reserve(submissions.size());
  for (size_t i = 0; i < submissions.size(); ++i) {
    owners[i] = i;
    current.push_back(std::move(submissions[i].layer1));
  }

  for (int layer = 1; layer <= layers && !current.empty(); ++layer) {
    // Group by tag, remembering owners.
    std::unordered_map<Bytes32, size_t, Bytes32Hash> index;
    std::vector<TagGroup> groups;
    std::vector<std::vector<size_t>> group_owners;
    for (size_t k = 0; k < current.size(); ++k) {
      auto [it, inserted] = index.try_emplace(current[k].tag, groups.size());
      if (inserted) {
        groups.push_back(TagGroup{current[k].tag, {}});
        group_owners.emplace_back();
      }
      groups[it->second].submissions.push_back(std::move(current[k]));
      group_owners[it->second].push_back(owners[k]);
    }
    std::vector<size_t> order(groups.size());
    for (size_t g = 0; g < order.size(); ++g) order[g] = g;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return groups[a].tag < groups[b].tag;
    });

    std::vector<Submission> next;
    std::vector<size_t> next_owners;
    HistogramReport& report = reports[layer - 1];
    for (size_t g : order) {
      RecoveryResult result = RecoverGroup(groups[g], params.threshold);
      AddToReport(result, report);
      const auto* recovered = std::get_if<Recovered>(&result);
      if (recovered == nullptr || layer == layers) continue;
      Bytes32 key = DeriveSymmetricKey(recovered->secret);
      for (size_t owner : group_owners[g]) {
        const SuperSubmission& s = submissions[owner];
        if (static_cast<size_t>(layer) > s.wrapped_layers.size()) continue;
        absl::StatusOr<Submission> inner =
            UnwrapLayer(key, layer + 1, s.wrapped_layers[layer - 1]);
        if (!inner.ok()) {
          ++reports[layer].malformed_members;
          continue;
        }
        next.push_back(*std::move(inner));
        next_owners.push_back(owner);
      }
    }
    current = std::move(next);
    owners = std::move(next_owners);
  }
  return reports;
}

absl::Status MultidimAggregator::Add(SuperSubmission submission) {
  std::lock_guard<std::mutex> lock(mu_);
  if (sealed_) return absl::FailedPreconditionError("ingestion is sealed");
  submissions_.push_back(std::move(submission));
  return absl::OkStatus();
}

void MultidimAggregator::Seal() {
  std::lock_guard<std::mutex> lock(mu_);
  sealed_ = true;
}

bool MultidimAggregator::sealed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sealed_;
}

size_t MultidimAggregator::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return submissions_.size();
}

absl::StatusOr<std::vector<HistogramReport>> MultidimAggregator::Decode() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!sealed_) return absl::FailedPreconditionError("seal before decoding");
  return DecodeMultidim(std::move(submissions_), params_);
}

}  // namespace nebula
