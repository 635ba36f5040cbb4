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
#ifndef NEBULA_TESTS_TEST_UTIL_H_
#define NEBULA_TESTS_TEST_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

#include "nebula/client_encode.h"
#include "nebula/dp_params.h"
#include "nebula/oprf.h"
#include "nebula/random.h"

namespace nebula::testing {

inline ServerKeypair TestKeypair() {
  Bytes32 seed{};
  seed.fill(0x5a);
  return ServerKeypair::FromSeed(seed);
}

// Parameters with an explicit threshold and everything else at the
// default budget with shift 15.
inline DpParams ParamsWithThreshold(int tau, double sampling_rate = 1.0) {
  ParamOverrides o;
  o.threshold = tau;
  o.sampling_rate = sampling_rate;
  o.tsdlap_shift = 15;
  return *DeriveParams(DpBudget{}, o);
}

// count honest submissions of value, skipping the blinded round trip.
inline std::vector<Submission> HonestSubmissions(std::string_view value,
                                                 int count,
                                                 const DpParams& params,
                                                 SecureRandom& rng) {
  Bytes32 r = EvaluateUnblinded(value, TestKeypair().secret_key);
  ValueEncoder enc = *ValueEncoder::Create(value, r, params.threshold);
  std::vector<Submission> out;
  for (int i = 0; i < count; ++i) out.push_back(enc.Encode(rng));
  return out;
}

}  // namespace nebula::testing

#endif  // NEBULA_TESTS_TEST_UTIL_H_
