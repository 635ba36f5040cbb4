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

// Chained-prefix encoding of multi-attribute records.
//
// A record [x_1, ..., x_l] yields l prefixes. Each prefix is encoded as an
// ordinary submission with its own OPRF output. The layer-i submission
// (i >= 2) travels encrypted under a key derived from the layer-(i-1) value
// key, so the server can open layer i only for members of a recovered
// layer-(i-1) group.
//
// SuperSubmission wire layout (big-endian):
//
//   u8   layer count l (1..8)
//   ...  layer-1 submission (see client_encode.h)
//   then for i = 2..l:
//     u16  blob length
//     ...  blob = nonce (24) || XChaCha20-Poly1305(wrap key of layer i-1,
//                  ad = "nebula/v1/layer" || u8 i, layer-i submission)
//
// Nonces are random rather than the layer index: two clients that share a
// prefix share its key but encrypt different shares, so a fixed nonce would
// repeat under one key with different plaintexts.

#ifndef NEBULA_MULTIDIM_H_
#define NEBULA_MULTIDIM_H_

#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "nebula/aggregate.h"
#include "nebula/bytes.h"
#include "nebula/client_encode.h"
#include "nebula/dp_params.h"
#include "nebula/dummy.h"
#include "nebula/random.h"

namespace nebula {

inline constexpr int kMaxAttributes = 8;
// Longest serialized prefix accepted by the encoder.
inline constexpr size_t kMaxPrefixLength =
    kMaxAttributes * (2 + kDefaultMaxValueLength);
inline constexpr size_t kWrapNonceSize = 24;
inline constexpr size_t kWrapOverhead = kWrapNonceSize + kAeadTagSize;

struct PrefixChain {
  std::vector<std::string> attributes;
  // prefixes[i] is the encoding of attributes[0..i].
  std::vector<std::string> prefixes;
};

// Errors on an empty list or more than max_attributes entries.
absl::StatusOr<PrefixChain> MakePrefixes(
    std::vector<std::string> attributes,
    int max_attributes = kMaxAttributes);

struct SuperSubmission {
  Submission layer1;
  std::vector<std::string> wrapped_layers;

  int layer_count() const { return 1 + static_cast<int>(wrapped_layers.size()); }
  size_t SerializedSize() const;
  std::string Serialize() const;
  void AppendTo(ByteWriter& out) const;
  static absl::StatusOr<SuperSubmission> Parse(std::string_view bytes);
  static absl::StatusOr<SuperSubmission> ReadFrom(ByteReader& in);

  friend bool operator==(const SuperSubmission& a, const SuperSubmission& b) {
    return a.layer1 == b.layer1 && a.wrapped_layers == b.wrapped_layers;
  }
};

// Key protecting layer `layer` (>= 2), derived from the layer-(layer-1)
// value key.
Bytes32 LayerWrapKey(const Bytes32& parent_value_key);

std::string WrapLayer(const Bytes32& parent_value_key, int layer,
                      const Submission& inner, SecureRandom& rng);
absl::StatusOr<Submission> UnwrapLayer(const Bytes32& parent_value_key,
                                       int layer, std::string_view blob);

// One OPRF output per prefix, in order.
absl::StatusOr<SuperSubmission> EncodeMultidim(
    absl::Span<const std::string> attributes,
    absl::Span<const Bytes32> randomness, const DpParams& params,
    SecureRandom& rng);

// Same, with per-prefix encoders built ahead of time (see ValueEncoder).
SuperSubmission EncodeMultidimWith(
    absl::Span<const ValueEncoder* const> encoders, SecureRandom& rng);

// Dummy super-submissions for the outer layer. Deeper layers carry random
// bytes of plausible length; they are never opened because dummy groups
// stay below the threshold. inner_value_lengths[j] lists candidate prefix
// lengths for layer j + 2.
absl::StatusOr<std::vector<SuperSubmission>> CreateDummySuperSubmissions(
    const DpParams& params, SecureRandom& rng, int layer_count,
    const DummyOptions& options = {},
    absl::Span<const std::vector<size_t>> inner_value_lengths = {});

// Layer-by-layer decode. Report i covers prefixes of length i + 1. Layer 1
// matches the single-attribute decode; inner layers are flagged as carrying
// no dummy noise. A wrapped blob that fails to open under its parent's key
// is counted in the next layer's malformed_members.
std::vector<HistogramReport> DecodeMultidim(
    std::vector<SuperSubmission> submissions, const DpParams& params);

// Streaming ingestion for super-submissions; same lifecycle as Aggregator.
class MultidimAggregator {
 public:
  explicit MultidimAggregator(DpParams params) : params_(std::move(params)) {}

  absl::Status Add(SuperSubmission submission);
  void Seal();
  bool sealed() const;
  size_t size() const;
  absl::StatusOr<std::vector<HistogramReport>> Decode();

 private:
  DpParams params_;
  mutable std::mutex mu_;
  bool sealed_ = false;
  std::vector<SuperSubmission> submissions_;
};

}  // namespace nebula

#endif  // NEBULA_MULTIDIM_H_
