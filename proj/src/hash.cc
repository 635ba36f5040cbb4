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

#include "nebula/hash.h"

#include <sodium.h>

#include <cstdlib>
#include <mutex>

namespace nebula {

namespace {

template <typename State, typename Update>
void UpdateFramed(State* state, Update update, std::string_view bytes) {
  uint8_t len[4] = {
      static_cast<uint8_t>(bytes.size() >> 24),
      static_cast<uint8_t>(bytes.size() >> 16),
      static_cast<uint8_t>(bytes.size() >> 8),
      static_cast<uint8_t>(bytes.size()),
  };
  update(state, len, sizeof(len));
  update(state, reinterpret_cast<const unsigned char*>(bytes.data()),
         bytes.size());
}

}  // namespace

void InitCrypto() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) std::abort();
  });
}

Bytes32 HashToBytes32(std::string_view domain,
                      std::initializer_list<std::string_view> parts) {
  crypto_hash_sha256_state state;
  crypto_hash_sha256_init(&state);
  UpdateFramed(&state, crypto_hash_sha256_update, domain);
  for (std::string_view part : parts) {
    UpdateFramed(&state, crypto_hash_sha256_update, part);
  }
  Bytes32 out;
  crypto_hash_sha256_final(&state, out.data());
  return out;
}

std::array<uint8_t, 64> HashToBytes64(
    std::string_view domain, std::initializer_list<std::string_view> parts) {
  crypto_hash_sha512_state state;
  crypto_hash_sha512_init(&state);
  UpdateFramed(&state, crypto_hash_sha512_update, domain);
  for (std::string_view part : parts) {
    UpdateFramed(&state, crypto_hash_sha512_update, part);
  }
  std::array<uint8_t, 64> out;
  crypto_hash_sha512_final(&state, out.data());
  return out;
}

Bytes32 Sha256(std::string_view data) {
  Bytes32 out;
  crypto_hash_sha256(out.data(),
                     reinterpret_cast<const unsigned char*>(data.data()),
                     data.size());
  return out;
}

}  // namespace nebula
