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

// End-to-end experiments: simulated client populations running the
// protocol, the central and local DP baselines, the error metric, and cost
// benchmarks.

#ifndef NEBULA_EXPERIMENT_H_
#define NEBULA_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "nebula/aggregate.h"
#include "nebula/dataset.h"
#include "nebula/dp_params.h"
#include "nebula/oprf.h"
#include "nebula/random.h"

namespace nebula {

using Histogram = std::map<std::string, uint64_t>;
using Distribution = std::map<std::string, double>;

// Divides by the total mass. An empty or all-zero input gives an empty map.
Distribution Normalize(const Histogram& histogram);
Distribution Normalize(const Distribution& weights);

// sum over the union of keys of |truth - estimate|; in [0, 2] for
// probability vectors.
double SumAbsoluteError(const Distribution& truth,
                        const Distribution& estimate);

// Values above this many bins are refused by the local baseline.
inline constexpr size_t kMaxLocalDomain = size_t{1} << 20;

// Laplace(1/epsilon) per bin over `domain`, negatives clamped, normalized.
Distribution CentralDpEstimate(const Histogram& truth,
                               absl::Span<const std::string> domain,
                               double epsilon, SecureRandom& rng);

// Every client one-hot encodes its value and adds Laplace(2/epsilon) to each
// coordinate; the server sums. The sum of n Laplace(b) draws is drawn
// exactly as the difference of two Gamma(n, b) draws per coordinate, so the
// cost is O(|domain|) instead of O(n |domain|).
absl::StatusOr<Distribution> LocalDpEstimate(
    const Histogram& truth, absl::Span<const std::string> domain,
    double epsilon, SecureRandom& rng);

// Same estimator with explicit per-client noise. Reference for tests.
absl::StatusOr<Distribution> LocalDpEstimatePerClient(
    absl::Span<const std::string> client_values,
    absl::Span<const std::string> domain, double epsilon, SecureRandom& rng);

enum class RunMode { kSingle, kMultidim };
enum class Transport { kInProcess, kDaemons };

std::string_view RunModeName(RunMode mode);
std::string_view TransportName(Transport transport);

// Deterministic given (dataset, params, seed, mode): no timings.
struct ExperimentResult {
  std::string mechanism;  // "nebula", "central", "local"
  RunMode mode = RunMode::kSingle;
  uint64_t seed = 0;
  std::optional<DpParams> params;
  // errors[i] is for prefixes of length i + 1 (one entry in single mode).
  std::vector<double> errors;
  size_t clients = 0;
  size_t participants = 0;
  size_t dummy_submissions = 0;
  size_t submissions = 0;
  size_t submission_bytes = 0;
  std::vector<HistogramReport> reports;

  double final_error() const { return errors.empty() ? 0 : errors.back(); }
};

// Single mode scores the whole record; multidim scores every prefix.
absl::StatusOr<ExperimentResult> RunCentralBaseline(const Dataset& dataset,
                                                    double epsilon,
                                                    uint64_t seed,
                                                    RunMode mode);
absl::StatusOr<ExperimentResult> RunLocalBaseline(const Dataset& dataset,
                                                  double epsilon,
                                                  uint64_t seed,
                                                  RunMode mode);

// OPRF outputs by input under one server key. The protocol output is a
// deterministic function of (key, input), so a simulated population only
// needs one verified round trip per distinct value; the blinding of each
// individual client changes nothing downstream.
class OprfCache {
 public:
  absl::StatusOr<std::vector<Bytes32>> Get(RandomnessService& service,
                                           absl::Span<const std::string> inputs,
                                           SecureRandom& rng);
  size_t size() const { return outputs_.size(); }
  // Round trips performed so far.
  size_t evaluations() const { return evaluations_; }

 private:
  std::optional<GroupElement> public_key_;
  std::unordered_map<std::string, Bytes32> outputs_;
  size_t evaluations_ = 0;
};

struct DaemonConfig {
  std::string randomness_server_bin;
  std::string aggregation_server_bin;
  // Scratch space for logs and reports; a temporary directory if empty.
  std::string work_dir;
  size_t window = 4096;
};

// Daemon binaries next to the running executable, overridable with
// NEBULA_BIN_DIR.
DaemonConfig DefaultDaemonConfig();

struct NebulaOptions {
  RunMode mode = RunMode::kSingle;
  Transport transport = Transport::kInProcess;
  bool dummies = true;
  // Fixed across seeds so OPRF outputs can be cached between runs.
  Bytes32 server_key_seed = DefaultServerKeySeed();
  DaemonConfig daemons;

  static Bytes32 DefaultServerKeySeed();
};

struct RunTimings {
  double oprf_seconds = 0;
  double encode_seconds = 0;
  // Ingest plus decode, through the aggregation daemon when used.
  double aggregate_seconds = 0;
};

// Simulates every client: Bernoulli(p_s) participation, OPRF, encoding;
// adds the dummy batch, shuffles delivery order, aggregates, and scores the
// revealed histogram(s) against the truth. Revealed estimates are
// normalized by the revealed mass.
absl::StatusOr<ExperimentResult> RunNebula(const Dataset& dataset,
                                           const DpParams& params,
                                           uint64_t seed,
                                           const NebulaOptions& options = {},
                                           OprfCache* cache = nullptr,
                                           RunTimings* timings = nullptr);

// The CSV form of a report set, as the aggregation daemon writes it.
std::string ReportCsv(const ExperimentResult& result);

// mechanism,mode,seed,layer,error
std::string ErrorsToCsv(absl::Span<const ExperimentResult> results);
// Canonical text of everything in a result; equal results give equal text.
std::string ResultFingerprint(const ExperimentResult& result);

struct MeanSd {
  double mean = 0;
  double sd = 0;
};
MeanSd Summarize(absl::Span<const double> values);

struct UtilityComparison {
  std::vector<ExperimentResult> runs;
  MeanSd nebula;
  MeanSd local;
  MeanSd central;
};

// All three mechanisms over seeds first_seed .. first_seed + seeds - 1,
// scored on the final error.
absl::StatusOr<UtilityComparison> CompareMechanisms(
    const Dataset& dataset, const DpParams& params, int seeds,
    uint64_t first_seed, const NebulaOptions& options, OprfCache* cache);

struct BenchRow {
  int attributes = 0;
  // Client side of the randomness round trip (blind + verify + unblind).
  double client_randomness_ms = 0;
  double client_randomness_unverified_ms = 0;
  double server_oprf_ms = 0;
  double client_encode_ms = 0;
  double decode_ms_per_submission = 0;
  size_t randomness_request_element_bytes = 0;
  size_t randomness_response_element_bytes = 0;
  size_t randomness_request_bytes = 0;
  size_t randomness_response_bytes = 0;
  size_t submission_bytes = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double r2_submission_bytes = 0;
  double r2_request_bytes = 0;
  double r2_encode_time = 0;
  double r2_randomness_time = 0;
  double r2_server_time = 0;
};

struct BenchOptions {
  // Records timed per attribute count.
  size_t samples = 200;
  // Copies per record submitted to the timed decode, so groups reveal.
  int copies = 25;
  uint64_t seed = 1;
};

// One row per prefix length 1..attribute_count, using records truncated to
// that length. Timings are medians over `samples` records.
absl::StatusOr<BenchReport> RunBenchmark(const Dataset& dataset,
                                         const DpParams& params,
                                         const BenchOptions& options = {});
std::string BenchToCsv(const BenchReport& report);

// Coefficient of determination of the least-squares line through (x, y).
double LinearFitR2(absl::Span<const double> x, absl::Span<const double> y);

}  // namespace nebula

#endif  // NEBULA_EXPERIMENT_H_
