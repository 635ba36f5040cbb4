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

// Small pieces shared by the daemon binaries.

#ifndef NEBULA_TOOLS_DAEMON_UTIL_H_
#define NEBULA_TOOLS_DAEMON_UTIL_H_

#include <signal.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "absl/status/statusor.h"
#include "nebula/dp_params.h"

namespace nebula::tools {

// Blocks SIGINT and SIGTERM in the calling thread and every thread it
// starts afterwards, so WaitForTermination() can pick them up with sigwait.
inline sigset_t BlockTerminationSignals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

inline int WaitForTermination(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
  return sig;
}

// Reads a "key=value" params file, or derives the defaults when path is
// empty.
inline absl::StatusOr<DpParams> LoadParams(const std::string& path) {
  if (path.empty()) return DeriveParams(DpBudget{});
  std::ifstream in(path);
  if (!in) return absl::NotFoundError("cannot open params file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return DpParams::FromConfig(buffer.str());
}

inline int Fail(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return 1;
}

}  // namespace nebula::tools

#endif  // NEBULA_TOOLS_DAEMON_UTIL_H_
