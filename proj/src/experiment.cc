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

#include "nebula/experiment.h"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nebula/client_encode.h"
#include "nebula/dummy.h"
#include "nebula/hash.h"
#include "nebula/multidim.h"
#include "nebula/net.h"
#include "nebula/prefix.h"
#include "nebula/status_macros.h"
#include "nebula/strings.h"

namespace nebula {

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double Laplace(double scale, SecureRandom& rng) {
  double a = -std::log(1.0 - rng.Uniform());
  double b = -std::log(1.0 - rng.Uniform());
  return scale * (a - b);
}

std::vector<std::string> DomainFor(const Histogram& truth,
                                   absl::Span<const std::string> domain) {
  if (!domain.empty()) return {domain.begin(), domain.end()};
  std::vector<std::string> out;
  out.reserve(truth.size());
  for (const auto& [value, count] : truth) out.push_back(value);
  return out;
}

Distribution ClampAndNormalize(const Distribution& noisy) {
  Distribution clamped;
  for (const auto& [value, w] : noisy) {
    if (w > 0) clamped[value] = w;
  }
  return Normalize(clamped);
}

absl::StatusOr<std::string> FullValue(const std::vector<std::string>& record) {
  return EncodePrefix(record);
}

// Histograms scored by a run: the full record in single mode, every prefix
// in multidim mode.
absl::StatusOr<std::vector<Histogram>> Truths(const Dataset& dataset,
                                              RunMode mode) {
  std::vector<Histogram> out;
  if (dataset.records.empty()) {
    out.resize(mode == RunMode::kSingle
                   ? 1
                   : std::max(1, dataset.attribute_count()));
    return out;
  }
  if (mode == RunMode::kSingle) {
    Histogram h;
    for (const auto& record : dataset.records) {
      NEBULA_ASSIGN_OR_RETURN(std::string v, FullValue(record));
      ++h[v];
    }
    out.push_back(std::move(h));
    return out;
  }
  for (int i = 1; i <= dataset.attribute_count(); ++i) {
    NEBULA_ASSIGN_OR_RETURN(Histogram h, PrefixHistogram(dataset, i));
    out.push_back(std::move(h));
  }
  return out;
}

// The domain handed to the baselines: the declared one for binned
// single-attribute data, the observed values otherwise.
std::vector<std::string> BaselineDomain(const Dataset& dataset, RunMode mode,
                                        const Histogram& truth, int layer) {
  bool use_declared = !dataset.domain.empty() &&
                      (mode == RunMode::kSingle || layer == 1) &&
                      dataset.attribute_count() == 1;
  return DomainFor(truth, use_declared
                              ? absl::MakeConstSpan(dataset.domain)
                              : absl::Span<const std::string>());
}

template <typename T>
void Shuffle(std::vector<T>& items, SecureRandom& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = rng.UniformInt(i);
    std::swap(items[i - 1], items[j]);
  }
}

std::vector<size_t> SortedLengths(const std::set<size_t>& lengths) {
  return {lengths.begin(), lengths.end()};
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Both daemons as child processes sharing nothing but the experiment's
// choice of key seed file and params file.
class DaemonSession {
 public:
  static absl::StatusOr<std::unique_ptr<DaemonSession>> Start(
      const DaemonConfig& config, const Bytes32& key_seed,
      const DpParams& params) {
    auto session = std::unique_ptr<DaemonSession>(new DaemonSession());
    if (config.work_dir.empty()) {
      std::string templ =
          (std::filesystem::temp_directory_path() / "nebula-XXXXXX").string();
      if (mkdtemp(templ.data()) == nullptr) {
        return absl::UnavailableError("cannot create a temporary directory");
      }
      session->dir_ = templ;
      session->owns_dir_ = true;
    } else {
      session->dir_ = config.work_dir;
      std::filesystem::create_directories(session->dir_);
    }
    std::string dir = session->dir_;
    std::string seed_file = dir + "/key.seed";
    std::string params_file = dir + "/params.conf";
    std::string rs_port = dir + "/randomness.port";
    std::string as_port = dir + "/aggregation.port";
    std::string log = dir + "/submissions.log";
    session->report_path_ = dir + "/report.csv";
    for (const std::string& f : {rs_port, as_port, log, session->report_path_}) {
      std::filesystem::remove(f);
    }
    NEBULA_RETURN_IF_ERROR(WriteKeySeedFile(seed_file, key_seed));
    NEBULA_RETURN_IF_ERROR(WriteFile(params_file, params.ToConfig()));

    NEBULA_ASSIGN_OR_RETURN(
        session->randomness_,
        ChildProcess::Spawn({config.randomness_server_bin, "--key-seed-file",
                             seed_file, "--port-file", rs_port}));
    NEBULA_ASSIGN_OR_RETURN(
        session->aggregation_,
        ChildProcess::Spawn({config.aggregation_server_bin, "--log", log,
                             "--params", params_file, "--report",
                             session->report_path_, "--port-file", as_port}));
    NEBULA_ASSIGN_OR_RETURN(uint16_t rport, WaitForPortFile(rs_port));
    NEBULA_ASSIGN_OR_RETURN(uint16_t aport, WaitForPortFile(as_port));
    session->randomness_address_ = HostPort{"127.0.0.1", rport};
    session->aggregation_address_ = HostPort{"127.0.0.1", aport};
    return session;
  }

  ~DaemonSession() {
    if (randomness_.running()) randomness_.Terminate().IgnoreError();
    if (aggregation_.running()) aggregation_.Terminate().IgnoreError();
    if (owns_dir_) {
      std::error_code ec;
      std::filesystem::remove_all(dir_, ec);
    }
  }

  const HostPort& randomness_address() const { return randomness_address_; }
  const HostPort& aggregation_address() const { return aggregation_address_; }

  absl::StatusOr<std::string> ReadReport() { return ReadFile(report_path_); }

  absl::Status Shutdown() {
    NEBULA_ASSIGN_OR_RETURN(int rs, randomness_.Terminate());
    NEBULA_ASSIGN_OR_RETURN(int as, aggregation_.Terminate());
    if (rs != 0 || as != 0) {
      return absl::InternalError(
          absl::StrCat("daemon exit codes ", rs, " and ", as));
    }
    return absl::OkStatus();
  }

 private:
  DaemonSession() = default;

  std::string dir_;
  bool owns_dir_ = false;
  std::string report_path_;
  ChildProcess randomness_ = ChildProcess::None();
  ChildProcess aggregation_ = ChildProcess::None();
  HostPort randomness_address_;
  HostPort aggregation_address_;
};

template <typename T>
absl::StatusOr<std::string> DeliverToDaemon(DaemonSession& session,
                                            const std::vector<T>& items,
                                            MessageType type, size_t window) {
  NEBULA_ASSIGN_OR_RETURN(auto client,
                          AggregationClient::Connect(session.aggregation_address()));
  NEBULA_RETURN_IF_ERROR(client->SubmitStream(
      items.size(),
      [&](size_t i) { return Frame{type, items[i].Serialize()}; }, window));
  NEBULA_ASSIGN_OR_RETURN(uint32_t decoded, client->Seal());
  if (decoded != items.size()) {
    return absl::InternalError(absl::StrCat("aggregation server accepted ",
                                            decoded, " of ", items.size()));
  }
  return session.ReadReport();
}

absl::StatusOr<std::vector<double>> ScoreLayers(
    const std::vector<Histogram>& truths,
    const std::vector<HistogramReport>& reports) {
  std::vector<double> errors;
  for (size_t i = 0; i < truths.size(); ++i) {
    Distribution estimate;
    if (i < reports.size()) estimate = Normalize(reports[i].revealed);
    errors.push_back(SumAbsoluteError(Normalize(truths[i]), estimate));
  }
  return errors;
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0;
  size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

double Mean(absl::Span<const double> v) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

}  // namespace

Distribution Normalize(const Histogram& histogram) {
  double total = 0;
  for (const auto& [value, count] : histogram) total += count;
  Distribution out;
  if (total <= 0) return out;
  for (const auto& [value, count] : histogram) {
    if (count > 0) out[value] = count / total;
  }
  return out;
}

Distribution Normalize(const Distribution& weights) {
  double total = 0;
  for (const auto& [value, w] : weights) {
    if (w > 0) total += w;
  }
  Distribution out;
  if (!(total > 0)) return out;
  for (const auto& [value, w] : weights) {
    if (w > 0) out[value] = w / total;
  }
  return out;
}

double SumAbsoluteError(const Distribution& truth,
                        const Distribution& estimate) {
  double error = 0;
  auto t = truth.begin();
  auto e = estimate.begin();
  while (t != truth.end() || e != estimate.end()) {
    if (e == estimate.end() || (t != truth.end() && t->first < e->first)) {
      error += std::abs(t->second);
      ++t;
    } else if (t == truth.end() || e->first < t->first) {
      error += std::abs(e->second);
      ++e;
    } else {
      error += std::abs(t->second - e->second);
      ++t;
      ++e;
    }
  }
  return error;
}

Distribution CentralDpEstimate(const Histogram& truth,
                               absl::Span<const std::string> domain,
                               double epsilon, SecureRandom& rng) {
  Distribution noisy;
  for (const std::string& value : DomainFor(truth, domain)) {
    auto it = truth.find(value);
    double count = it == truth.end() ? 0 : static_cast<double>(it->second);
    noisy[value] = count + Laplace(1.0 / epsilon, rng);
  }
  return ClampAndNormalize(noisy);
}

absl::StatusOr<Distribution> LocalDpEstimate(
    const Histogram& truth, absl::Span<const std::string> domain,
    double epsilon, SecureRandom& rng) {
  std::vector<std::string> bins = DomainFor(truth, domain);
  if (bins.size() > kMaxLocalDomain) {
    return absl::ResourceExhaustedError(
        absl::StrCat("one-hot domain of ", bins.size(),
                     " bins exceeds the limit of ", kMaxLocalDomain));
  }
  double clients = 0;
  for (const auto& [value, count] : truth) clients += count;
  Distribution noisy;
  if (clients == 0) return noisy;
  double scale = 2.0 / epsilon;
  std::gamma_distribution<double> gamma(clients, scale);
  for (const std::string& value : bins) {
    auto it = truth.find(value);
    double count = it == truth.end() ? 0 : static_cast<double>(it->second);
    double noise = gamma(rng) - gamma(rng);
    noisy[value] = count + noise;
  }
  return ClampAndNormalize(noisy);
}

absl::StatusOr<Distribution> LocalDpEstimatePerClient(
    absl::Span<const std::string> client_values,
    absl::Span<const std::string> domain, double epsilon, SecureRandom& rng) {
  if (domain.size() > kMaxLocalDomain) {
    return absl::ResourceExhaustedError("one-hot domain too large");
  }
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < domain.size(); ++i) index[domain[i]] = i;
  std::vector<double> sums(domain.size(), 0.0);
  for (const std::string& v : client_values) {
    auto it = index.find(v);
    if (it == index.end()) {
      return absl::InvalidArgumentError("client value outside the domain");
    }
    for (size_t j = 0; j < domain.size(); ++j) {
      sums[j] += (j == it->second ? 1.0 : 0.0) + Laplace(2.0 / epsilon, rng);
    }
  }
  Distribution noisy;
  if (client_values.empty()) return noisy;
  for (size_t j = 0; j < domain.size(); ++j) noisy[domain[j]] = sums[j];
  return ClampAndNormalize(noisy);
}

std::string_view RunModeName(RunMode mode) {
  return mode == RunMode::kSingle ? "single" : "multidim";
}

std::string_view TransportName(Transport transport) {
  return transport == Transport::kInProcess ? "inproc" : "daemons";
}

namespace {

absl::StatusOr<ExperimentResult> RunBaseline(const Dataset& dataset,
                                             double epsilon, uint64_t seed,
                                             RunMode mode, bool local) {
  if (!(epsilon > 0)) return absl::InvalidArgumentError("epsilon must be > 0");
  NEBULA_ASSIGN_OR_RETURN(std::vector<Histogram> truths, Truths(dataset, mode));
  ExperimentResult result;
  result.mechanism = local ? "local" : "central";
  result.mode = mode;
  result.seed = seed;
  result.clients = dataset.size();
  SecureRandom rng =
      SecureRandom::ForStream(seed, local ? "baseline-local" : "baseline-central");
  for (size_t i = 0; i < truths.size(); ++i) {
    std::vector<std::string> domain =
        BaselineDomain(dataset, mode, truths[i], static_cast<int>(i + 1));
    Distribution estimate;
    if (local) {
      NEBULA_ASSIGN_OR_RETURN(estimate,
                              LocalDpEstimate(truths[i], domain, epsilon, rng));
    } else {
      estimate = CentralDpEstimate(truths[i], domain, epsilon, rng);
    }
    result.errors.push_back(SumAbsoluteError(Normalize(truths[i]), estimate));
  }
  return result;
}

}  // namespace

absl::StatusOr<ExperimentResult> RunCentralBaseline(const Dataset& dataset,
                                                    double epsilon,
                                                    uint64_t seed,
                                                    RunMode mode) {
  return RunBaseline(dataset, epsilon, seed, mode, /*local=*/false);
}

absl::StatusOr<ExperimentResult> RunLocalBaseline(const Dataset& dataset,
                                                  double epsilon,
                                                  uint64_t seed,
                                                  RunMode mode) {
  return RunBaseline(dataset, epsilon, seed, mode, /*local=*/true);
}

absl::StatusOr<std::vector<Bytes32>> OprfCache::Get(
    RandomnessService& service, absl::Span<const std::string> inputs,
    SecureRandom& rng) {
  NEBULA_ASSIGN_OR_RETURN(GroupElement key, service.PublicKey());
  if (!public_key_ || *public_key_ != key) {
    outputs_.clear();
    public_key_ = key;
  }
  std::set<std::string> missing;
  for (const std::string& in : inputs) {
    if (!outputs_.contains(in)) missing.insert(in);
  }
  if (!missing.empty()) {
    std::vector<std::string> batch(missing.begin(), missing.end());
    NEBULA_ASSIGN_OR_RETURN(std::vector<Bytes32> r,
                            ObtainRandomness(service, batch, rng));
    evaluations_ += batch.size();
    for (size_t i = 0; i < batch.size(); ++i) outputs_[batch[i]] = r[i];
  }
  std::vector<Bytes32> out;
  out.reserve(inputs.size());
  for (const std::string& in : inputs) out.push_back(outputs_.at(in));
  return out;
}

Bytes32 NebulaOptions::DefaultServerKeySeed() {
  return HashToBytes32(domains::kKeygen, {"experiment-server"});
}

DaemonConfig DefaultDaemonConfig() {
  std::string dir;
  if (const char* env = std::getenv("NEBULA_BIN_DIR"); env != nullptr) {
    dir = env;
  } else {
    std::error_code ec;
    std::filesystem::path self = std::filesystem::read_symlink("/proc/self/exe", ec);
    dir = ec ? "." : self.parent_path().string();
  }
  auto find = [&](const std::string& name) {
    for (const std::string& candidate :
         {dir + "/" + name, dir + "/../tools/" + name}) {
      if (std::filesystem::exists(candidate)) return candidate;
    }
    return dir + "/" + name;
  };
  DaemonConfig config;
  config.randomness_server_bin = find("nebula_randomness_server");
  config.aggregation_server_bin = find("nebula_aggregation_server");
  return config;
}

absl::StatusOr<ExperimentResult> RunNebula(const Dataset& dataset,
                                           const DpParams& params,
                                           uint64_t seed,
                                           const NebulaOptions& options,
                                           OprfCache* cache,
                                           RunTimings* timings) {
  const bool multidim = options.mode == RunMode::kMultidim;
  const int layers = multidim ? dataset.attribute_count() : 1;
  if (multidim && (layers < 1 || layers > kMaxAttributes)) {
    return absl::InvalidArgumentError(
        absl::StrCat("multidim runs need 1..", kMaxAttributes,
                     " attributes, got ", layers));
  }
  NEBULA_ASSIGN_OR_RETURN(std::vector<Histogram> truths,
                          Truths(dataset, options.mode));

  ExperimentResult result;
  result.mechanism = "nebula";
  result.mode = options.mode;
  result.seed = seed;
  result.params = params;
  result.clients = dataset.size();

  SecureRandom participation = SecureRandom::ForStream(seed, "participation");
  SecureRandom blinding = SecureRandom::ForStream(seed, "blinding");
  SecureRandom shares = SecureRandom::ForStream(seed, "shares");
  SecureRandom dummy_rng = SecureRandom::ForStream(seed, "dummies");
  SecureRandom shuffle = SecureRandom::ForStream(seed, "shuffle");

  // Every client's inputs: the whole record, or each of its prefixes.
  std::vector<std::vector<std::string>> inputs(dataset.size());
  std::vector<std::set<size_t>> lengths(layers);
  for (size_t i = 0; i < dataset.size(); ++i) {
    const auto& record = dataset.records[i];
    if (static_cast<int>(record.size()) != dataset.attribute_count()) {
      return absl::InvalidArgumentError("records differ in attribute count");
    }
    if (multidim) {
      NEBULA_ASSIGN_OR_RETURN(PrefixChain chain, MakePrefixes(record));
      inputs[i] = std::move(chain.prefixes);
    } else {
      NEBULA_ASSIGN_OR_RETURN(std::string v, FullValue(record));
      inputs[i] = {std::move(v)};
    }
    for (int l = 0; l < layers; ++l) lengths[l].insert(inputs[i][l].size());
  }

  std::vector<size_t> participants;
  for (size_t i = 0; i < dataset.size(); ++i) {
    if (Participate(params.sampling_rate, participation)) {
      participants.push_back(i);
    }
  }
  result.participants = participants.size();

  std::unique_ptr<DaemonSession> session;
  std::unique_ptr<RandomnessService> service;
  if (options.transport == Transport::kDaemons) {
    NEBULA_ASSIGN_OR_RETURN(
        session,
        DaemonSession::Start(options.daemons, options.server_key_seed, params));
    NEBULA_ASSIGN_OR_RETURN(
        service, RemoteRandomnessService::Connect(session->randomness_address()));
  } else {
    service = std::make_unique<LocalRandomnessService>(
        ServerKeypair::FromSeed(options.server_key_seed));
  }

  Clock::time_point start = Clock::now();
  std::set<std::string> needed;
  for (size_t i : participants) needed.insert(inputs[i].begin(), inputs[i].end());
  std::vector<std::string> distinct(needed.begin(), needed.end());
  OprfCache run_cache;
  OprfCache& oprf = cache != nullptr ? *cache : run_cache;
  NEBULA_ASSIGN_OR_RETURN(std::vector<Bytes32> r,
                          oprf.Get(*service, distinct, blinding));
  double oprf_seconds = SecondsSince(start);

  start = Clock::now();
  size_t max_length = multidim ? kMaxPrefixLength : kDefaultMaxValueLength;
  std::unordered_map<std::string, ValueEncoder> encoders;
  encoders.reserve(distinct.size());
  for (size_t k = 0; k < distinct.size(); ++k) {
    NEBULA_ASSIGN_OR_RETURN(
        ValueEncoder enc, ValueEncoder::Create(distinct[k], r[k],
                                               params.threshold, max_length));
    encoders.emplace(distinct[k], std::move(enc));
  }

  std::vector<HistogramReport> reports;
  std::string csv;
  Clock::time_point aggregate_start;
  if (!multidim) {
    std::vector<Submission> subs;
    subs.reserve(participants.size());
    for (size_t i : participants) {
      subs.push_back(encoders.at(inputs[i][0]).Encode(shares));
    }
    if (options.dummies) {
      NEBULA_ASSIGN_OR_RETURN(
          DummyBatch batch,
          CreateDummyBatch(params, dummy_rng, {SortedLengths(lengths[0])}));
      result.dummy_submissions = batch.total_submissions();
      for (Submission& s : batch.ReleaseSubmissions()) subs.push_back(std::move(s));
    }
    Shuffle(subs, shuffle);
    result.submissions = subs.size();
    for (const Submission& s : subs) result.submission_bytes += s.SerializedSize();

    aggregate_start = Clock::now();
    if (session) {
      NEBULA_ASSIGN_OR_RETURN(
          csv, DeliverToDaemon(*session, subs, MessageType::kSubmit,
                               options.daemons.window));
    } else {
      Aggregator aggregator(params);
      for (Submission& s : subs) {
        NEBULA_RETURN_IF_ERROR(aggregator.Add(std::move(s)));
      }
      aggregator.Seal();
      NEBULA_ASSIGN_OR_RETURN(HistogramReport report, aggregator.Decode());
      csv = ReportToCsv(report);
    }
  } else {
    std::vector<SuperSubmission> subs;
    subs.reserve(participants.size());
    std::vector<const ValueEncoder*> chain(layers);
    for (size_t i : participants) {
      for (int l = 0; l < layers; ++l) chain[l] = &encoders.at(inputs[i][l]);
      subs.push_back(EncodeMultidimWith(chain, shares));
    }
    if (options.dummies) {
      std::vector<std::vector<size_t>> inner;
      for (int l = 1; l < layers; ++l) inner.push_back(SortedLengths(lengths[l]));
      NEBULA_ASSIGN_OR_RETURN(
          std::vector<SuperSubmission> dummies,
          CreateDummySuperSubmissions(params, dummy_rng, layers,
                                      {SortedLengths(lengths[0])}, inner));
      result.dummy_submissions = dummies.size();
      for (SuperSubmission& s : dummies) subs.push_back(std::move(s));
    }
    Shuffle(subs, shuffle);
    result.submissions = subs.size();
    for (const SuperSubmission& s : subs) {
      result.submission_bytes += s.SerializedSize();
    }

    aggregate_start = Clock::now();
    if (session) {
      NEBULA_ASSIGN_OR_RETURN(
          csv, DeliverToDaemon(*session, subs, MessageType::kSubmitLayered,
                               options.daemons.window));
    } else {
      MultidimAggregator aggregator(params);
      for (SuperSubmission& s : subs) {
        NEBULA_RETURN_IF_ERROR(aggregator.Add(std::move(s)));
      }
      aggregator.Seal();
      NEBULA_ASSIGN_OR_RETURN(reports, aggregator.Decode());
      csv = ReportsToCsv(reports);
    }
  }
  double encode_seconds =
      std::chrono::duration<double>(aggregate_start - start).count();
  double aggregate_seconds = SecondsSince(aggregate_start);
  if (session) NEBULA_RETURN_IF_ERROR(session->Shutdown());

  NEBULA_ASSIGN_OR_RETURN(result.reports, ParseReportsCsv(csv));
  NEBULA_ASSIGN_OR_RETURN(result.errors, ScoreLayers(truths, result.reports));
  if (timings != nullptr) {
    *timings = RunTimings{oprf_seconds, encode_seconds, aggregate_seconds};
  }
  return result;
}

std::string ReportCsv(const ExperimentResult& result) {
  return ReportsToCsv(result.reports);
}

std::string ErrorsToCsv(absl::Span<const ExperimentResult> results) {
  std::string out = "mechanism,mode,seed,layer,error\n";
  for (const ExperimentResult& r : results) {
    for (size_t i = 0; i < r.errors.size(); ++i) {
      absl::StrAppend(&out, r.mechanism, ",", ToAbsl(RunModeName(r.mode)), ",",
                      r.seed, ",", i + 1, ",",
                      absl::StrFormat("%.17g", r.errors[i]), "\n");
    }
  }
  return out;
}

std::string ResultFingerprint(const ExperimentResult& result) {
  std::string out = absl::StrCat(
      "mechanism=", result.mechanism, "\nmode=", ToAbsl(RunModeName(result.mode)),
      "\nseed=", result.seed, "\nclients=", result.clients,
      "\nparticipants=", result.participants,
      "\ndummy_submissions=", result.dummy_submissions,
      "\nsubmissions=", result.submissions,
      "\nsubmission_bytes=", result.submission_bytes, "\n");
  if (result.params) absl::StrAppend(&out, result.params->ToConfig());
  for (double e : result.errors) {
    absl::StrAppend(&out, "error=", absl::StrFormat("%.17g", e), "\n");
  }
  absl::StrAppend(&out, ReportCsv(result));
  return out;
}

MeanSd Summarize(absl::Span<const double> values) {
  MeanSd out;
  if (values.empty()) return out;
  out.mean = Mean(values);
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / (values.size() - 1));
  }
  return out;
}

absl::StatusOr<UtilityComparison> CompareMechanisms(
    const Dataset& dataset, const DpParams& params, int seeds,
    uint64_t first_seed, const NebulaOptions& options, OprfCache* cache) {
  UtilityComparison out;
  std::vector<double> nebula, local, central;
  for (int k = 0; k < seeds; ++k) {
    uint64_t seed = first_seed + k;
    NEBULA_ASSIGN_OR_RETURN(
        ExperimentResult n, RunNebula(dataset, params, seed, options, cache));
    NEBULA_ASSIGN_OR_RETURN(
        ExperimentResult c,
        RunCentralBaseline(dataset, params.epsilon(), seed, options.mode));
    NEBULA_ASSIGN_OR_RETURN(
        ExperimentResult l,
        RunLocalBaseline(dataset, params.epsilon(), seed, options.mode));
    nebula.push_back(n.final_error());
    central.push_back(c.final_error());
    local.push_back(l.final_error());
    n.reports.clear();
    out.runs.push_back(std::move(n));
    out.runs.push_back(std::move(c));
    out.runs.push_back(std::move(l));
  }
  out.nebula = Summarize(nebula);
  out.local = Summarize(local);
  out.central = Summarize(central);
  return out;
}

double LinearFitR2(absl::Span<const double> x, absl::Span<const double> y) {
  size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0;
  double mx = Mean(x.subspan(0, n)), my = Mean(y.subspan(0, n));
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) return 0;
  if (syy == 0) return 1;
  return (sxy * sxy) / (sxx * syy);
}

absl::StatusOr<BenchReport> RunBenchmark(const Dataset& dataset,
                                         const DpParams& params,
                                         const BenchOptions& options) {
  if (dataset.records.empty()) {
    return absl::InvalidArgumentError("benchmark needs a non-empty dataset");
  }
  int max_attributes = std::min(dataset.attribute_count(), kMaxAttributes);
  ServerKeypair keypair = ServerKeypair::FromSeed(NebulaOptions::DefaultServerKeySeed());
  SecureRandom rng = SecureRandom::ForStream(options.seed, "benchmark");
  size_t samples = std::min(options.samples, dataset.size());

  BenchReport report;
  for (int attrs = 1; attrs <= max_attributes; ++attrs) {
    std::vector<double> client_ms, unverified_ms, server_ms, encode_ms;
    double submission_bytes = 0;
    std::vector<std::vector<ValueEncoder>> encoders;
    for (size_t s = 0; s < samples; ++s) {
      std::vector<std::string> record(dataset.records[s].begin(),
                                      dataset.records[s].begin() + attrs);
      NEBULA_ASSIGN_OR_RETURN(PrefixChain chain, MakePrefixes(record));
      const std::vector<std::string>& inputs = chain.prefixes;

      Clock::time_point t0 = Clock::now();
      std::vector<BlindedInput> blinded;
      std::vector<GroupElement> elements;
      for (const std::string& in : inputs) {
        NEBULA_ASSIGN_OR_RETURN(BlindedInput b, Blind(in, rng));
        elements.push_back(b.element);
        blinded.push_back(std::move(b));
      }
      Clock::time_point t1 = Clock::now();
      NEBULA_ASSIGN_OR_RETURN(Evaluation ev, Evaluate(elements, keypair));
      Clock::time_point t2 = Clock::now();
      NEBULA_ASSIGN_OR_RETURN(std::vector<Bytes32> r,
                              Finalize(blinded, ev, keypair.public_key));
      Clock::time_point t3 = Clock::now();
      NEBULA_RETURN_IF_ERROR(FinalizeWithoutVerification(blinded, ev).status());
      Clock::time_point t4 = Clock::now();

      auto ms = [](Clock::time_point a, Clock::time_point b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
      };
      client_ms.push_back(ms(t0, t1) + ms(t2, t3));
      unverified_ms.push_back(ms(t0, t1) + ms(t3, t4));
      server_ms.push_back(ms(t1, t2));

      Clock::time_point e0 = Clock::now();
      std::vector<ValueEncoder> encs;
      for (size_t l = 0; l < inputs.size(); ++l) {
        NEBULA_ASSIGN_OR_RETURN(
            ValueEncoder enc, ValueEncoder::Create(inputs[l], r[l],
                                                   params.threshold,
                                                   kMaxPrefixLength));
        encs.push_back(std::move(enc));
      }
      size_t bytes;
      if (attrs == 1) {
        bytes = encs[0].Encode(rng).SerializedSize();
      } else {
        std::vector<const ValueEncoder*> ptrs;
        for (const ValueEncoder& e : encs) ptrs.push_back(&e);
        bytes = EncodeMultidimWith(ptrs, rng).SerializedSize();
      }
      encode_ms.push_back(ms(e0, Clock::now()));
      submission_bytes += bytes;
      encoders.push_back(std::move(encs));
    }

    // Decode cost on copies of every sampled record.
    size_t decoded = 0;
    Clock::time_point d0 = Clock::now();
    if (attrs == 1) {
      std::vector<Submission> subs;
      for (const auto& encs : encoders) {
        for (int c = 0; c < options.copies; ++c) subs.push_back(encs[0].Encode(rng));
      }
      decoded = subs.size();
      d0 = Clock::now();
      BuildReport(GroupByTag(subs), params);
    } else {
      std::vector<SuperSubmission> subs;
      for (const auto& encs : encoders) {
        std::vector<const ValueEncoder*> ptrs;
        for (const ValueEncoder& e : encs) ptrs.push_back(&e);
        for (int c = 0; c < options.copies; ++c) {
          subs.push_back(EncodeMultidimWith(ptrs, rng));
        }
      }
      decoded = subs.size();
      d0 = Clock::now();
      DecodeMultidim(std::move(subs), params);
    }
    double decode_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - d0).count();

    BenchRow row;
    row.attributes = attrs;
    row.client_randomness_ms = Median(client_ms);
    row.client_randomness_unverified_ms = Median(unverified_ms);
    row.server_oprf_ms = Median(server_ms);
    row.client_encode_ms = Median(encode_ms);
    row.decode_ms_per_submission = decoded ? decode_ms / decoded : 0;
    row.randomness_request_element_bytes = 32 * attrs;
    row.randomness_response_element_bytes = 32 * attrs;
    row.randomness_request_bytes = 1 + 32 * attrs;
    row.randomness_response_bytes = 32 * attrs + DleqProof::kEncodedSize;
    row.submission_bytes =
        static_cast<size_t>(std::llround(submission_bytes / samples));
    report.rows.push_back(row);
  }

  std::vector<double> x, sub, req, enc, cli, srv;
  for (const BenchRow& row : report.rows) {
    x.push_back(row.attributes);
    sub.push_back(row.submission_bytes);
    req.push_back(row.randomness_request_bytes);
    enc.push_back(row.client_encode_ms);
    cli.push_back(row.client_randomness_ms);
    srv.push_back(row.server_oprf_ms);
  }
  report.r2_submission_bytes = LinearFitR2(x, sub);
  report.r2_request_bytes = LinearFitR2(x, req);
  report.r2_encode_time = LinearFitR2(x, enc);
  report.r2_randomness_time = LinearFitR2(x, cli);
  report.r2_server_time = LinearFitR2(x, srv);
  return report;
}

std::string BenchToCsv(const BenchReport& report) {
  std::string out =
      "attributes,client_randomness_ms,client_randomness_unverified_ms,"
      "server_oprf_ms,client_encode_ms,decode_ms_per_submission,"
      "randomness_request_element_bytes,randomness_response_element_bytes,"
      "randomness_request_bytes,randomness_response_bytes,submission_bytes\n";
  for (const BenchRow& r : report.rows) {
    absl::StrAppend(
        &out, r.attributes, ",", absl::StrFormat("%.6f", r.client_randomness_ms),
        ",", absl::StrFormat("%.6f", r.client_randomness_unverified_ms), ",",
        absl::StrFormat("%.6f", r.server_oprf_ms), ",",
        absl::StrFormat("%.6f", r.client_encode_ms), ",",
        absl::StrFormat("%.6f", r.decode_ms_per_submission), ",",
        r.randomness_request_element_bytes, ",",
        r.randomness_response_element_bytes, ",", r.randomness_request_bytes,
        ",", r.randomness_response_bytes, ",", r.submission_bytes, "\n");
  }
  return out;
}

}  // namespace nebula
