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

// Sub-threshold dummy groups that noise the unrevealed-multiplicity
// histogram. For every multiplicity i in 1..tau-1 the batch holds c_i groups
// of i submissions each, with c_i ~ TSDLap(scale, shift).

#ifndef NEBULA_DUMMY_H_
#define NEBULA_DUMMY_H_

#include <cstddef>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "absl/status/statusor.h"
#include "nebula/bytes.h"
#include "nebula/client_encode.h"
#include "nebula/dp_params.h"
#include "nebula/random.h"

namespace nebula {

struct DummyGroup {
  Bytes32 tag;
  int multiplicity = 0;
};

struct DummyOptions {
  // Plaintext value lengths to imitate. Each group picks one uniformly so its
  // ciphertext length matches some real submission. Empty means length 0.
  std::vector<size_t> value_lengths;
};

// c_1..c_{tau-1}; element i-1 is the number of groups of multiplicity i.
// Empty when tau <= 1.
absl::StatusOr<std::vector<int>> SampleDummyCounts(const DpParams& params,
                                                   SecureRandom& rng);

// Groups only, no submission bytes. Cheap enough for large Monte-Carlo runs.
absl::StatusOr<std::vector<DummyGroup>> PlanDummyGroups(const DpParams& params,
                                                        SecureRandom& rng);

class DummyBatch {
 public:
  DummyBatch() = default;
  DummyBatch(std::vector<DummyGroup> groups,
             std::vector<Submission> submissions);

  const std::vector<DummyGroup>& groups() const { return groups_; }
  const std::vector<Submission>& submissions() const { return submissions_; }
  std::vector<Submission> ReleaseSubmissions() {
    return std::move(submissions_);
  }
  size_t total_submissions() const;

  // Test oracle: the aggregation server has no such table.
  bool ContainsTag(const Bytes32& tag) const { return tags_.contains(tag); }

 private:
  std::vector<DummyGroup> groups_;
  std::vector<Submission> submissions_;
  std::unordered_set<Bytes32, Bytes32Hash> tags_;
};

// One group's worth of dummy submissions: a shared random tag, a shared
// ciphertext of a zero-filled value under a fresh random key, and uniformly
// random share points.
std::vector<Submission> MakeDummyGroup(const Bytes32& tag, int multiplicity,
                                       size_t value_length,
                                       SecureRandom& rng);

absl::StatusOr<DummyBatch> CreateDummyBatch(const DpParams& params,
                                            SecureRandom& rng,
                                            const DummyOptions& options = {});

inline bool IsDummyTag(const Bytes32& tag, const DummyBatch& batch) {
  return batch.ContainsTag(tag);
}

}  // namespace nebula

#endif  // NEBULA_DUMMY_H_
