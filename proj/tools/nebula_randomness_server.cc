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

// Randomness daemon: answers OPRF evaluation and public-key requests.
// Stateless apart from the key; shares nothing with the aggregation daemon.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "daemon_util.h"
#include "nebula/net.h"
#include "nebula/oprf.h"
#include "nebula/random.h"

int main(int argc, char** argv) {
  CLI::App app{"Nebula randomness server"};
  std::string listen = "127.0.0.1:0";
  std::string key_seed_file;
  std::string port_file;
  app.add_option("--listen", listen, "host:port to bind; port 0 picks one")
      ->envname("NEBULA_RANDOMNESS_LISTEN");
  app.add_option("--key-seed-file", key_seed_file,
                 "32-byte seed (raw or hex); created if missing")
      ->envname("NEBULA_RANDOMNESS_KEY_SEED_FILE");
  app.add_option("--port-file", port_file, "write the bound port here")
      ->envname("NEBULA_RANDOMNESS_PORT_FILE");
  CLI11_PARSE(app, argc, argv);

  sigset_t signals = nebula::tools::BlockTerminationSignals();

  absl::StatusOr<nebula::HostPort> address = nebula::ParseHostPort(listen);
  if (!address.ok()) return nebula::tools::Fail(address.status());

  nebula::Bytes32 seed;
  if (key_seed_file.empty()) {
    nebula::SecureRandom::FromOs().Fill(seed.data(), seed.size());
  } else {
    absl::StatusOr<nebula::Bytes32> loaded =
        nebula::ReadKeySeedFile(key_seed_file);
    if (absl::IsNotFound(loaded.status())) {
      nebula::SecureRandom::FromOs().Fill(seed.data(), seed.size());
      absl::Status written = nebula::WriteKeySeedFile(key_seed_file, seed);
      if (!written.ok()) return nebula::tools::Fail(written);
    } else if (!loaded.ok()) {
      return nebula::tools::Fail(loaded.status());
    } else {
      seed = *loaded;
    }
  }

  nebula::RandomnessServer server(nebula::ServerKeypair::FromSeed(seed));
  absl::Status started = server.Start(*address);
  if (!started.ok()) return nebula::tools::Fail(started);
  if (!port_file.empty()) {
    absl::Status s = nebula::WritePortFile(port_file, server.port());
    if (!s.ok()) return nebula::tools::Fail(s);
  }
  std::cerr << "randomness server listening on " << address->host << ":"
            << server.port() << "\n";

  nebula::tools::WaitForTermination(signals);
  server.Stop();
  return 0;
}
