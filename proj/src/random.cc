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

#include "nebula/random.h"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <string>

#include "nebula/hash.h"

namespace nebula {

SecureRandom::SecureRandom(const Bytes32& seed) : seed_(seed) {}

SecureRandom SecureRandom::FromOs() {
  InitCrypto();
  Bytes32 seed;
  randombytes_buf(seed.data(), seed.size());
  return SecureRandom(seed);
}

SecureRandom SecureRandom::ForStream(uint64_t seed, std::string_view name) {
  uint8_t le[8];
  for (int i = 0; i < 8; ++i) le[i] = static_cast<uint8_t>(seed >> (8 * i));
  return SecureRandom(HashToBytes32(
      domains::kRngStream,
      {std::string_view(reinterpret_cast<const char*>(le), 8), name}));
}

SecureRandom SecureRandom::Fork(std::string_view name) const {
  return SecureRandom(
      HashToBytes32(domains::kRngStream, {AsStringView(seed_), name}));
}

void SecureRandom::Refill() {
  // One ChaCha20 nonce per buffer; the 64-bit counter never wraps in practice.
  uint8_t nonce[crypto_stream_chacha20_NONCEBYTES];
  for (size_t i = 0; i < sizeof(nonce); ++i) {
    nonce[i] = static_cast<uint8_t>(block_counter_ >> (8 * i));
  }
  ++block_counter_;
  crypto_stream_chacha20(buffer_.data(), buffer_.size(), nonce, seed_.data());
  position_ = 0;
}

void SecureRandom::Fill(uint8_t* out, size_t n) {
  while (n > 0) {
    if (position_ == kBufferSize) Refill();
    size_t take = std::min(n, kBufferSize - position_);
    std::memcpy(out, buffer_.data() + position_, take);
    position_ += take;
    out += take;
    n -= take;
  }
}

SecureRandom::result_type SecureRandom::operator()() {
  uint64_t v;
  Fill(reinterpret_cast<uint8_t*>(&v), sizeof(v));
  return v;
}

Bytes32 SecureRandom::NextBytes32() {
  Bytes32 out;
  Fill(out.data(), out.size());
  return out;
}

double SecureRandom::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

uint64_t SecureRandom::UniformInt(uint64_t n) {
  // Rejection sampling removes modulo bias.
  const uint64_t limit = max() - max() % n;
  uint64_t v;
  do {
    v = (*this)();
  } while (v >= limit);
  return v % n;
}

}  // namespace nebula
