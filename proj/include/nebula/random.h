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

#ifndef NEBULA_RANDOM_H_
#define NEBULA_RANDOM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>

#include "nebula/bytes.h"

namespace nebula {

// Cryptographically secure, seedable random source: a ChaCha20 keystream
// keyed by a 32-byte seed. Identical seeds give identical sequences, which
// is what makes every simulation reproducible. Satisfies the standard
// UniformRandomBitGenerator requirements so it plugs into <random>
// distributions.
//
// Not thread-safe; each thread or simulated party owns its own instance.
class SecureRandom {
 public:
  using result_type = uint64_t;

  explicit SecureRandom(const Bytes32& seed);

  // Seeds from the operating system. Used by daemons and real clients.
  static SecureRandom FromOs();

  // Named sub-stream of an experiment seed. Streams with different names are
  // independent; the same (seed, name) pair always yields the same stream.
  static SecureRandom ForStream(uint64_t seed, std::string_view name);

  // Child stream derived from this stream's seed and a name. Does not depend
  // on (or advance) the parent's position.
  SecureRandom Fork(std::string_view name) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  void Fill(uint8_t* out, size_t n);
  Bytes32 NextBytes32();

  // Uniform double in [0, 1) with 53 bits of precision.
  double Uniform();
  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

 private:
  static constexpr size_t kBufferSize = 1024;

  void Refill();

  Bytes32 seed_;
  uint64_t block_counter_ = 0;
  std::array<uint8_t, kBufferSize> buffer_;
  size_t position_ = kBufferSize;
};

}  // namespace nebula

#endif  // NEBULA_RANDOM_H_
