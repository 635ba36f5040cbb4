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


// Experiment driver.
//
//   nebula params    derived parameters for a privacy budget
//   nebula run       one dataset, all three mechanisms, CSV outputs
//   nebula sweep-bins  error against histogram bin count
//   nebula bench     per-attribute costs

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nebula/dataset.h"
#include "nebula/dp_params.h"
#include "nebula/experiment.h"
#include "nebula/status_macros.h"
#include "nebula/strings.h"

namespace nebula {
namespace {

struct BudgetFlags {
  double eps = 1.0;
  double delta = 1e-8;
  double alpha = 1.0 / 6.0;
  std::optional<int> tau;
  std::optional<int> shift;
  std::optional<double> sampling_rate;

  void Register(CLI::App& app) {
    app.add_option("--eps", eps, "privacy budget epsilon (both paths)");
    app.add_option("--delta", delta, "privacy budget delta (both paths)");
    app.add_option("--alpha", alpha, "sampling parameter alpha");
    app.add_option("--tau-override", tau, "use this threshold");
    app.add_option("--shift-override", shift, "use this dummy-noise shift");
    app.add_option("--sampling-override", sampling_rate,
                   "use this participation probability");
  }

  absl::StatusOr<DpParams> Params() const {
    DpBudget budget{eps, delta, eps, delta, alpha};
    ParamOverrides o;
    o.threshold = tau;
    o.tsdlap_shift = shift;
    o.sampling_rate = sampling_rate;
    return DeriveParams(budget, o);
  }
};

absl::Status WriteText(const std::filesystem::path& path,
                       std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path.string()));
  return absl::OkStatus();
}

absl::Status Emit(const std::string& path, std::string_view text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return absl::OkStatus();
  }
  return WriteText(path, text);
}

std::string Fixed(double v) { return absl::StrFormat("%.6f", v); }

struct RunFlags {
  std::string dataset;
  std::optional<int> bin_bits;
  bool multidim = false;
  std::string transport = "inproc";
  uint64_t seed = 1;
  int seeds = 1;
  bool no_dummies = false;
  size_t bench_samples = 50;
  std::string out;
};

absl::Status Run(const BudgetFlags& budget, const RunFlags& flags) {
  NEBULA_ASSIGN_OR_RETURN(DpParams params, budget.Params());
  NEBULA_ASSIGN_OR_RETURN(Dataset dataset,
                          LoadDataset(flags.dataset, flags.bin_bits, flags.seed));
  NebulaOptions options;
  options.mode = flags.multidim ? RunMode::kMultidim : RunMode::kSingle;
  options.dummies = !flags.no_dummies;
  if (flags.transport == "daemons") {
    options.transport = Transport::kDaemons;
    options.daemons = DefaultDaemonConfig();
  } else if (flags.transport != "inproc") {
    return absl::InvalidArgumentError("--transport is daemons or inproc");
  }

  std::filesystem::path dir(flags.out);
  std::filesystem::create_directories(dir);
  NEBULA_RETURN_IF_ERROR(WriteText(dir / "params.conf", params.ToConfig()));

  OprfCache cache;
  std::vector<ExperimentResult> results;
  std::string first_report;
  for (int k = 0; k < flags.seeds; ++k) {
    uint64_t seed = flags.seed + k;
    NEBULA_ASSIGN_OR_RETURN(
        ExperimentResult n, RunNebula(dataset, params, seed, options, &cache));
    NEBULA_ASSIGN_OR_RETURN(
        ExperimentResult c,
        RunCentralBaseline(dataset, params.epsilon(), seed, options.mode));
    absl::StatusOr<ExperimentResult> l =
        RunLocalBaseline(dataset, params.epsilon(), seed, options.mode);
    if (k == 0) first_report = ReportCsv(n);
    std::cerr << absl::StrFormat(
        "seed %d: %d clients, %d participants, %d dummies, error %.6f\n",
        seed, n.clients, n.participants, n.dummy_submissions, n.final_error());
    results.push_back(std::move(n));
    results.push_back(std::move(c));
    if (l.ok()) {
      results.push_back(*std::move(l));
    } else if (k == 0) {
      std::cerr << "local baseline skipped: " << l.status() << "\n";
    }
  }
  NEBULA_RETURN_IF_ERROR(WriteText(dir / "report.csv", first_report));
  NEBULA_RETURN_IF_ERROR(WriteText(dir / "errors.csv", ErrorsToCsv(results)));

  // Mean error per mechanism and prefix length.
  std::map<std::pair<std::string, size_t>, std::vector<double>> series;
  for (const ExperimentResult& r : results) {
    for (size_t i = 0; i < r.errors.size(); ++i) {
      series[{r.mechanism, i + 1}].push_back(r.errors[i]);
    }
  }
  std::string plot = "series,x,y,sd\n";
  for (const auto& [key, values] : series) {
    MeanSd s = Summarize(values);
    absl::StrAppend(&plot, key.first, ",", key.second, ",", Fixed(s.mean), ",",
                    Fixed(s.sd), "\n");
  }
  NEBULA_RETURN_IF_ERROR(WriteText(dir / "plot.csv", plot));

  if (!dataset.records.empty()) {
    BenchOptions bench;
    bench.samples = flags.bench_samples;
    bench.seed = flags.seed;
    NEBULA_ASSIGN_OR_RETURN(BenchReport report,
                            RunBenchmark(dataset, params, bench));
    NEBULA_RETURN_IF_ERROR(WriteText(dir / "bench.csv", BenchToCsv(report)));
  } else {
    NEBULA_RETURN_IF_ERROR(WriteText(dir / "bench.csv", BenchToCsv({})));
  }
  std::cerr << "wrote " << dir.string() << "\n";
  return absl::OkStatus();
}

struct SweepFlags {
  std::string dataset;
  int min_bits = 6;
  int max_bits = 14;
  int seeds = 20;
  uint64_t seed = 1;
  std::string out;
};

absl::Status SweepBins(const BudgetFlags& budget, const SweepFlags& flags) {
  NEBULA_ASSIGN_OR_RETURN(DpParams params, budget.Params());
  std::string csv = "bits,nebula,nebula-sd,ldp,ldp-sd,gdp,gdp-sd\n";
  OprfCache cache;
  for (int bits = flags.min_bits; bits <= flags.max_bits; ++bits) {
    NEBULA_ASSIGN_OR_RETURN(Dataset dataset,
                            LoadDataset(flags.dataset, bits, flags.seed));
    NEBULA_ASSIGN_OR_RETURN(
        UtilityComparison c,
        CompareMechanisms(dataset, params, flags.seeds, flags.seed, {}, &cache));
    absl::StrAppend(&csv, bits, ",", Fixed(c.nebula.mean), ",",
                    Fixed(c.nebula.sd), ",", Fixed(c.local.mean), ",",
                    Fixed(c.local.sd), ",", Fixed(c.central.mean), ",",
                    Fixed(c.central.sd), "\n");
    std::cerr << "bits " << bits << " done\n";
  }
  return Emit(flags.out, csv);
}

struct BenchFlags {
  std::string dataset = "synthetic:geo:n=2000";
  size_t samples = 200;
  int copies = 25;
  uint64_t seed = 1;
  std::string out;
};

absl::Status Bench(const BudgetFlags& budget, const BenchFlags& flags) {
  NEBULA_ASSIGN_OR_RETURN(DpParams params, budget.Params());
  NEBULA_ASSIGN_OR_RETURN(Dataset dataset,
                          LoadDataset(flags.dataset, std::nullopt, flags.seed));
  BenchOptions o{flags.samples, flags.copies, flags.seed};
  NEBULA_ASSIGN_OR_RETURN(BenchReport report, RunBenchmark(dataset, params, o));
  std::cerr << absl::StrFormat(
      "r2: submission bytes %.4f, request bytes %.4f, encode %.4f, "
      "randomness %.4f, server %.4f\n",
      report.r2_submission_bytes, report.r2_request_bytes,
      report.r2_encode_time, report.r2_randomness_time, report.r2_server_time);
  return Emit(flags.out, BenchToCsv(report));
}

int Report(const absl::Status& status) {
  if (status.ok()) return 0;
  std::cerr << "error: " << status << "\n";
  return 1;
}

}  // namespace
}  // namespace nebula

int main(int argc, char** argv) {
  using namespace nebula;  // NOLINT
  CLI::App app{"Nebula private histogram experiments"};
  app.require_subcommand(1);

  BudgetFlags budget;

  CLI::App* params = app.add_subcommand("params", "print derived parameters");
  budget.Register(*params);

  RunFlags run;
  CLI::App* run_cmd = app.add_subcommand("run", "run every mechanism on a dataset");
  budget.Register(*run_cmd);
  run_cmd->add_option("--dataset", run.dataset,
                      "file path, csv:<path>:<cols>, geo:<path>:<c,lat,lon> "
                      "or synthetic:zipf|census|geo[:k=v,...]")
      ->required();
  run_cmd->add_option("--bin-bits", run.bin_bits, "hash-bin single values");
  run_cmd->add_flag("--multidim", run.multidim, "prefix encoding");
  run_cmd->add_option("--transport", run.transport, "daemons or inproc")
      ->check(CLI::IsMember({"daemons", "inproc"}));
  run_cmd->add_option("--seed", run.seed, "first seed");
  run_cmd->add_option("--seeds", run.seeds, "number of seeds")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--no-dummies", run.no_dummies, "skip the dummy batch");
  run_cmd->add_option("--bench-samples", run.bench_samples,
                      "records timed for bench.csv");
  run_cmd->add_option("--out", run.out, "output directory")->required();

  SweepFlags sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep-bins", "error against histogram bin count");
  budget.Register(*sweep_cmd);
  sweep_cmd->add_option("--dataset", sweep.dataset,
                        "corpus path or synthetic:zipf[:...]")
      ->required();
  sweep_cmd->add_option("--min-bits", sweep.min_bits);
  sweep_cmd->add_option("--max-bits", sweep.max_bits);
  sweep_cmd->add_option("--seeds", sweep.seeds)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep.seed, "first seed");
  sweep_cmd->add_option("--out", sweep.out, "CSV path; stdout if omitted");

  BenchFlags bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "per-attribute costs");
  budget.Register(*bench_cmd);
  bench_cmd->add_option("--dataset", bench.dataset, "multi-attribute dataset");
  bench_cmd->add_option("--samples", bench.samples);
  bench_cmd->add_option("--copies", bench.copies);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--out", bench.out, "CSV path; stdout if omitted");

  CLI11_PARSE(app, argc, argv);

  if (params->parsed()) {
    absl::StatusOr<DpParams> p = budget.Params();
    if (!p.ok()) return Report(p.status());
    std::cout << p->ToConfig();
    return 0;
  }
  if (run_cmd->parsed()) return Report(Run(budget, run));
  if (sweep_cmd->parsed()) return Report(SweepBins(budget, sweep));
  return Report(Bench(budget, bench));
}
