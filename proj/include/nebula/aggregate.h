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

// Aggregation server decode: group submissions by tag, recover the value of
// every group with at least tau members, and count the rest by size.

#ifndef NEBULA_AGGREGATE_H_
#define NEBULA_AGGREGATE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "nebula/bytes.h"
#include "nebula/client_encode.h"
#include "nebula/dp_params.h"
#include "nebula/field.h"

namespace nebula {

struct TagGroup {
  Bytes32 tag;
  std::vector<Submission> submissions;
};

// Partition by tag. Groups come back sorted by tag so that everything
// downstream is independent of arrival order.
std::vector<TagGroup> GroupByTag(std::vector<Submission> submissions);

struct Recovered {
  std::string value;
  size_t count = 0;
  // Interpolated secret; the multidim decoder derives the next layer's key
  // from it.
  FieldElement secret;
};

struct Unrevealed {
  size_t count = 0;
};

struct Malformed {
  size_t count = 0;
  std::string reason;
};

using RecoveryResult = std::variant<Recovered, Unrevealed, Malformed>;

// For |group| >= threshold: takes the first `threshold` shares with distinct
// x-coordinates in byte order, interpolates the secret, decrypts, and checks
// that every member carries the same ciphertext. Any failure is Malformed.
RecoveryResult RecoverGroup(const TagGroup& group, int threshold);

struct HistogramReport {
  // Layer 1 values are raw bytes; deeper layers hold serialized prefixes.
  int layer = 1;
  // False for layers that received no dummy groups.
  bool dummy_noise = true;
  DpParams params;
  std::map<std::string, uint64_t> revealed;
  std::map<int, uint64_t> unrevealed_multiplicities;
  uint64_t malformed_groups = 0;
  // Submissions in malformed groups plus wrapped layers that failed to open.
  uint64_t malformed_members = 0;

  uint64_t revealed_mass() const;

  friend bool operator==(const HistogramReport&,
                         const HistogramReport&) = default;
};

// Tallies recovery results. Revealed counts are full group sizes.
HistogramReport BuildReport(absl::Span<const TagGroup> groups,
                            const DpParams& params);
void AddToReport(const RecoveryResult& result, HistogramReport& report);

// CSV layout, one record per line, fields separated by ',':
//
//   nebula-report,1
//   layer,<int>
//   dummy_noise,<0|1>
//   param,<key>,<value>            (one row per DpParams config key)
//   malformed_groups,<int>
//   malformed_members,<int>
//   revealed,<number of rows>
//   value,count
//   <value>,<count>                (sorted by raw value bytes)
//   unrevealed,<number of rows>
//   multiplicity,num_tags
//   <i>,<num_tags>                 (ascending i)
//   end
//
// Values are percent-encoded: bytes outside 0x21..0x7e and the characters
// , " % | are written as %XX. Layers >= 2 print the prefix attributes
// individually encoded and joined with '|'.
std::string ReportToCsv(const HistogramReport& report);
std::string ReportsToCsv(absl::Span<const HistogramReport> reports);
absl::StatusOr<std::vector<HistogramReport>> ParseReportsCsv(
    std::string_view csv);
absl::StatusOr<HistogramReport> ParseReportCsv(std::string_view csv);

std::string PercentEncode(std::string_view bytes);
absl::StatusOr<std::string> PercentDecode(std::string_view text);

// Streaming ingestion. Add() may be called from many threads until Seal();
// Decode() runs after Seal() with exclusive access.
class Aggregator {
 public:
  explicit Aggregator(DpParams params) : params_(std::move(params)) {}

  Aggregator(const Aggregator&) = delete;
  Aggregator& operator=(const Aggregator&) = delete;

  absl::Status Add(Submission submission);
  void Seal();
  bool sealed() const;
  size_t size() const;

  absl::StatusOr<HistogramReport> Decode();

 private:
  static constexpr size_t kShards = 16;

  struct Shard {
    mutable std::mutex mu;
    std::unordered_map<Bytes32, std::vector<Submission>, Bytes32Hash> groups;
    size_t size = 0;
  };

  DpParams params_;
  mutable std::mutex state_mu_;
  bool sealed_ = false;
  std::array<Shard, kShards> shards_;
};

}  // namespace nebula

#endif  // NEBULA_AGGREGATE_H_
