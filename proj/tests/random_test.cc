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

#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "nebula/hash.h"

namespace nebula {
namespace {

TEST(SecureRandomTest, SameSeedSameStream) {
  SecureRandom a = SecureRandom::ForStream(42, "x");
  SecureRandom b = SecureRandom::ForStream(42, "x");
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(SecureRandomTest, NamesAndSeedsSeparateStreams) {
  SecureRandom a = SecureRandom::ForStream(42, "x");
  SecureRandom b = SecureRandom::ForStream(42, "y");
  SecureRandom c = SecureRandom::ForStream(43, "x");
  uint64_t va = a();
  EXPECT_NE(va, b());
  EXPECT_NE(va, c());
}

TEST(SecureRandomTest, ForkIgnoresParentPosition) {
  SecureRandom a = SecureRandom::ForStream(7, "parent");
  SecureRandom fork1 = a.Fork("child");
  for (int i = 0; i < 10; ++i) a();
  SecureRandom fork2 = a.Fork("child");
  EXPECT_EQ(fork1(), fork2());
}

TEST(SecureRandomTest, UniformIsInUnitIntervalWithCorrectMean) {
  SecureRandom rng = SecureRandom::ForStream(1, "uniform");
  const int n = 200000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Standard error of the mean of U(0,1) is sqrt(1/12/n).
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}

TEST(SecureRandomTest, UniformIntCoversRangeEvenly) {
  SecureRandom rng = SecureRandom::ForStream(2, "uniform-int");
  const int n = 70000;
  std::vector<int> counts(7);
  for (int i = 0; i < n; ++i) {
    uint64_t v = rng.UniformInt(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  // Chi-square with 6 degrees of freedom; 22.46 is the 0.999 quantile.
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi2, 22.46);
}

TEST(SecureRandomTest, FillCrossesBufferBoundaries) {
  SecureRandom a = SecureRandom::ForStream(3, "fill");
  SecureRandom b = SecureRandom::ForStream(3, "fill");
  std::vector<uint8_t> big(5000);
  a.Fill(big.data(), big.size());
  std::vector<uint8_t> pieces(5000);
  size_t pos = 0;
  for (size_t step : {1, 7, 1000, 1500, 2492}) {
    b.Fill(pieces.data() + pos, step);
    pos += step;
  }
  EXPECT_EQ(big, pieces);
}

TEST(HashTest, FramingSeparatesPartBoundaries) {
  EXPECT_NE(HashToBytes32("d", {"ab", "c"}), HashToBytes32("d", {"a", "bc"}));
  EXPECT_NE(HashToBytes32("d1", {"x"}), HashToBytes32("d2", {"x"}));
  EXPECT_EQ(HashToBytes32("d", {"x"}), HashToBytes32("d", {"x"}));
}

TEST(HashTest, Sha256KnownAnswer) {
  // SHA-256("abc") from FIPS 180-2.
  Bytes32 h = Sha256("abc");
  const uint8_t expected[4] = {0xba, 0x78, 0x16, 0xbf};
  for (int i = 0; i < 4; ++i) EXPECT_EQ(h[i], expected[i]);
  EXPECT_EQ(h[31], 0xad);
}

}  // namespace
}  // namespace nebula
