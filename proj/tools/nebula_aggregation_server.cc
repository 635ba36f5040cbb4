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

// Aggregation daemon: ingests submissions into an append-only log and
// decodes them once sealed. With --seal-and-decode it only replays an
// existing log, seals it, writes the report and exits.

#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "daemon_util.h"
#include "nebula/net.h"

int main(int argc, char** argv) {
  CLI::App app{"Nebula aggregation server"};
  std::string listen = "127.0.0.1:0";
  std::string log_path;
  std::string params_path;
  std::string report_path;
  std::string port_file;
  bool seal_and_decode = false;
  app.add_option("--listen", listen, "host:port to bind; port 0 picks one")
      ->envname("NEBULA_AGGREGATION_LISTEN");
  app.add_option("--log", log_path, "append-only submission log")
      ->envname("NEBULA_AGGREGATION_LOG");
  app.add_option("--params", params_path,
                 "params file (key=value lines); defaults if omitted")
      ->envname("NEBULA_AGGREGATION_PARAMS");
  app.add_option("--report", report_path, "report CSV written on seal")
      ->envname("NEBULA_AGGREGATION_REPORT");
  app.add_option("--port-file", port_file, "write the bound port here")
      ->envname("NEBULA_AGGREGATION_PORT_FILE");
  app.add_flag("--seal-and-decode", seal_and_decode,
               "seal the existing log, write the report and exit")
      ->envname("NEBULA_AGGREGATION_SEAL_AND_DECODE");
  CLI11_PARSE(app, argc, argv);

  sigset_t signals = nebula::tools::BlockTerminationSignals();

  absl::StatusOr<nebula::DpParams> params =
      nebula::tools::LoadParams(params_path);
  if (!params.ok()) return nebula::tools::Fail(params.status());

  absl::StatusOr<std::unique_ptr<nebula::AggregationServer>> server =
      nebula::AggregationServer::Create({*params, log_path, report_path});
  if (!server.ok()) return nebula::tools::Fail(server.status());

  if (seal_and_decode) {
    if (log_path.empty()) {
      return nebula::tools::Fail(
          absl::InvalidArgumentError("--seal-and-decode needs --log"));
    }
    absl::StatusOr<std::string> csv = (*server)->SealAndDecode();
    if (!csv.ok()) return nebula::tools::Fail(csv.status());
    if (report_path.empty()) std::cout << *csv;
    return 0;
  }

  absl::StatusOr<nebula::HostPort> address = nebula::ParseHostPort(listen);
  if (!address.ok()) return nebula::tools::Fail(address.status());
  absl::Status started = (*server)->Start(*address);
  if (!started.ok()) return nebula::tools::Fail(started);
  if (!port_file.empty()) {
    absl::Status s = nebula::WritePortFile(port_file, (*server)->port());
    if (!s.ok()) return nebula::tools::Fail(s);
  }
  std::cerr << "aggregation server listening on " << address->host << ":"
            << (*server)->port() << "\n";

  nebula::tools::WaitForTermination(signals);
  (*server)->Stop();
  return 0;
}
