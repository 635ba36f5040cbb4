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
#include "nebula/client_encode.h"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "nebula/oprf.h"
#include "nebula/shamir.h"
#include "test_util.h"

namespace nebula {
namespace {

using ::nebula::testing::ParamsWithThreshold;
using ::nebula::testing::TestKeypair;

Bytes32 RandomBytes(SecureRandom& rng) { return rng.NextBytes32(); }

TEST(ParseRandomnessTest, DeterministicAndDistinct) {
  SecureRandom rng = SecureRandom::ForStream(1, "parse");
  for (int i = 0; i < 10000; ++i) {
    Bytes32 r = RandomBytes(rng);
    SubRandomness a = ParseRandomness(r);
    SubRandomness b = ParseRandomness(r);
    ASSERT_EQ(a.key_seed, b.key_seed);
    ASSERT_EQ(a.tag, b.tag);
    ASSERT_NE(a.key_seed, a.share_seed);
    ASSERT_NE(a.share_seed, a.tag);
    ASSERT_NE(a.key_seed, a.tag);
  }
}

TEST(ParseRandomnessTest, OneBitChangeChangesEverything) {
  Bytes32 r{};
  Bytes32 r2 = r;
  r2[0] ^= 1;
  SubRandomness a = ParseRandomness(r);
  SubRandomness b = ParseRandomness(r2);
  EXPECT_NE(a.key_seed, b.key_seed);
  EXPECT_NE(a.share_seed, b.share_seed);
  EXPECT_NE(a.tag, b.tag);
}

TEST(MakeShareTest, SamePolynomialFreshPoints) {
  SecureRandom rng = SecureRandom::ForStream(2, "share");
  Bytes32 r1 = RandomBytes(rng), r2 = RandomBytes(rng);
  const int tau = 5;
  std::vector<KeyShare> shares;
  for (int i = 0; i < tau; ++i) shares.push_back(*MakeShare(r1, r2, tau, rng));
  EXPECT_NE(shares[0].x, shares[1].x);
  EXPECT_EQ(*InterpolateAtZero(shares), SecretFromKeySeed(r1));
  // A sixth share lies on the same polynomial.
  shares.push_back(*MakeShare(r1, r2, tau, rng));
  EXPECT_EQ(*InterpolateAtZero(shares), SecretFromKeySeed(r1));
  shares.resize(tau - 1);
  EXPECT_NE(*InterpolateAtZero(shares), SecretFromKeySeed(r1));
  EXPECT_FALSE(MakeShare(r1, r2, 0, rng).ok());
}

TEST(EncryptValueTest, RoundTripAndDeterminism) {
  SecureRandom rng = SecureRandom::ForStream(3, "encrypt");
  Bytes32 r1 = RandomBytes(rng);
  std::string ct = *EncryptValue(r1, "hamlet");
  EXPECT_EQ(ct, *EncryptValue(r1, "hamlet"));
  EXPECT_EQ(ct.size(), 32 + 6 + 16u);
  absl::StatusOr<std::string> v = DecryptValue(SecretFromKeySeed(r1), ct);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(*v, "hamlet");
  EXPECT_EQ(*DecryptValue(SecretFromKeySeed(r1), *EncryptValue(r1, "")), "");
}

TEST(EncryptValueTest, WrongKeyFailsAuthentication) {
  SecureRandom rng = SecureRandom::ForStream(4, "encrypt");
  Bytes32 r1 = RandomBytes(rng);
  Bytes32 other = r1;
  other[0] ^= 1;
  std::string ct = *EncryptValue(r1, "x");
  EXPECT_FALSE(DecryptValue(SecretFromKeySeed(other), ct).ok());
  std::string flipped = ct;
  flipped[5] ^= 1;
  EXPECT_FALSE(DecryptValue(SecretFromKeySeed(r1), flipped).ok());
  EXPECT_FALSE(DecryptValue(SecretFromKeySeed(r1), "short").ok());
}

TEST(EncryptValueTest, EnforcesMaximumLength) {
  Bytes32 r1{};
  EXPECT_TRUE(EncryptValue(r1, std::string(256, 'a')).ok());
  EXPECT_EQ(EncryptValue(r1, std::string(257, 'a')).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_TRUE(EncryptValue(r1, std::string(300, 'a'), 300).ok());
}

TEST(ParticipateTest, Extremes) {
  SecureRandom rng = SecureRandom::ForStream(5, "participate");
  for (int i = 0; i < 10000; ++i) {
    ASSERT_FALSE(Participate(0.0, rng));
    ASSERT_TRUE(Participate(1.0, rng));
  }
}

TEST(ParticipateTest, EmpiricalRate) {
  SecureRandom rng = SecureRandom::ForStream(6, "participate");
  const int n = 1000000;
  const double p = 0.105;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += Participate(p, rng);
  EXPECT_NEAR(hits / double(n), p, 3 * std::sqrt(p * (1 - p) / n));
}

TEST(SubmissionTest, SerializationRoundTripAndSize) {
  SecureRandom rng = SecureRandom::ForStream(7, "submission");
  DpParams params = ParamsWithThreshold(20);
  for (const std::string& value :
       std::vector<std::string>{"", "a", "hamlet", std::string(154, 'z')}) {
    Bytes32 r = EvaluateUnblinded(value.empty() ? "e" : value,
                                  TestKeypair().secret_key);
    Submission s = *BuildSubmission(value, r, params, rng);
    std::string bytes = s.Serialize();
    EXPECT_EQ(bytes.size(), 146 + value.size());
    EXPECT_LE(bytes.size(), 300u);
    absl::StatusOr<Submission> back = Submission::Parse(bytes);
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, s);
  }
}

TEST(SubmissionTest, ParseRejectsMalformedBytes) {
  SecureRandom rng = SecureRandom::ForStream(8, "submission");
  Bytes32 r = EvaluateUnblinded("x", TestKeypair().secret_key);
  std::string bytes =
      BuildSubmission("x", r, ParamsWithThreshold(3), rng)->Serialize();
  EXPECT_FALSE(Submission::Parse(bytes.substr(0, bytes.size() - 1)).ok());
  EXPECT_FALSE(Submission::Parse(bytes + "!").ok());
  std::string bad_x = bytes;
  for (int i = 32; i < 64; ++i) bad_x[i] = '\xff';
  EXPECT_FALSE(Submission::Parse(bad_x).ok());
}

TEST(SubmissionTest, SameValueSameTagAndCiphertextDistinctValuesDistinctTags) {
  SecureRandom rng = SecureRandom::ForStream(9, "tags");
  DpParams params = ParamsWithThreshold(20);
  ServerKeypair kp = TestKeypair();
  LocalRandomnessService service(kp);
  // Two clients with independent blinding.
  SecureRandom c1 = SecureRandom::ForStream(1, "client");
  SecureRandom c2 = SecureRandom::ForStream(2, "client");
  std::vector<std::string> x = {"ophelia"};
  Submission a = *BuildSubmission(x[0], (*ObtainRandomness(service, x, c1))[0],
                                  params, c1);
  Submission b = *BuildSubmission(x[0], (*ObtainRandomness(service, x, c2))[0],
                                  params, c2);
  EXPECT_EQ(a.tag, b.tag);
  EXPECT_EQ(a.ciphertext, b.ciphertext);
  EXPECT_NE(a.share.x, b.share.x);

  std::set<Bytes32> tags;
  for (int i = 0; i < 10000; ++i) {
    std::string v = "value-" + std::to_string(i);
    tags.insert(ValueEncoder::Create(v, EvaluateUnblinded(v, kp.secret_key),
                                     params.threshold)
                    ->tag());
  }
  EXPECT_EQ(tags.size(), 10000u);
}

TEST(SubmissionTest, CarriesNoClientIdentifier) {
  // Two submissions of one value from one client share only the
  // value-derived fields (tag, ciphertext); the share bytes are fresh.
  SecureRandom rng = SecureRandom::ForStream(10, "unlinkable");
  DpParams params = ParamsWithThreshold(20);
  Bytes32 r = EvaluateUnblinded("x", TestKeypair().secret_key);
  ValueEncoder enc = *ValueEncoder::Create("x", r, params.threshold);
  Submission a = enc.Encode(rng);
  Submission b = enc.Encode(rng);
  EXPECT_NE(a.share.x, b.share.x);
  EXPECT_NE(a.share.y, b.share.y);
  EXPECT_EQ(a.Serialize().size(), b.Serialize().size());
}

TEST(ValueEncoderTest, MatchesBuildSubmissionParts) {
  SecureRandom rng = SecureRandom::ForStream(11, "encoder");
  Bytes32 r = RandomBytes(rng);
  ValueEncoder enc = *ValueEncoder::Create("v", r, 4);
  SubRandomness sub = ParseRandomness(r);
  EXPECT_EQ(enc.tag(), sub.tag);
  EXPECT_EQ(enc.secret(), SecretFromKeySeed(sub.key_seed));
  EXPECT_EQ(enc.key(), DeriveSymmetricKey(enc.secret()));
  EXPECT_EQ(enc.ciphertext(), *EncryptValue(sub.key_seed, "v"));
  EXPECT_FALSE(ValueEncoder::Create("v", r, 0).ok());
}

}  // namespace
}  // namespace nebula
