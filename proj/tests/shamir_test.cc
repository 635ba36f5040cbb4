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
#include "nebula/shamir.h"

#include <vector>

#include "gtest/gtest.h"
#include "nebula/random.h"

namespace nebula {
namespace {

std::vector<KeyShare> Shares(const SharingPolynomial& p, int n,
                             SecureRandom& rng) {
  std::vector<KeyShare> out;
  for (int i = 0; i < n; ++i) {
    FieldElement x = FieldElement::RandomNonZero(rng);
    out.push_back({x, p.Evaluate(x)});
  }
  return out;
}

TEST(SharingPolynomialTest, CoefficientsArePureFunctionOfSeed) {
  Bytes32 seed{};
  seed[0] = 1;
  FieldElement s = FieldElement::FromUint64(99);
  SharingPolynomial a = SharingPolynomial::FromSeed(s, seed, 5);
  SharingPolynomial b = SharingPolynomial::FromSeed(s, seed, 5);
  EXPECT_EQ(a.coefficients(), b.coefficients());
  EXPECT_EQ(a.coefficients().size(), 5u);
  EXPECT_EQ(a.coefficients()[0], s);
  seed[0] = 2;
  EXPECT_NE(SharingPolynomial::FromSeed(s, seed, 5).coefficients()[1],
            a.coefficients()[1]);
}

TEST(SharingPolynomialTest, HornerMatchesPowerSum) {
  Bytes32 seed{};
  SharingPolynomial p = SharingPolynomial::FromSeed(FieldElement::FromUint64(7), seed, 4);
  FieldElement x = FieldElement::FromUint64(3);
  FieldElement expected;
  FieldElement power = FieldElement::One();
  for (const FieldElement& c : p.coefficients()) {
    expected = expected + c * power;
    power = power * x;
  }
  EXPECT_EQ(p.Evaluate(x), expected);
}

TEST(InterpolateTest, ThresholdSharesRecoverSecret) {
  SecureRandom rng = SecureRandom::ForStream(1, "shamir");
  for (int tau : {1, 2, 3, 20}) {
    FieldElement s = FieldElement::Random(rng);
    SharingPolynomial p = SharingPolynomial::FromSeed(s, rng.NextBytes32(), tau);
    std::vector<KeyShare> shares = Shares(p, tau, rng);
    absl::StatusOr<FieldElement> r = InterpolateAtZero(shares);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(*r, s) << "tau=" << tau;
    // More than tau shares also lie on the same polynomial.
    std::vector<KeyShare> more = Shares(p, tau + 3, rng);
    EXPECT_EQ(*InterpolateAtZero(more), s);
  }
}

TEST(InterpolateTest, FewerSharesDoNotRecover) {
  SecureRandom rng = SecureRandom::ForStream(2, "shamir");
  for (int trial = 0; trial < 100; ++trial) {
    FieldElement s = FieldElement::Random(rng);
    SharingPolynomial p = SharingPolynomial::FromSeed(s, rng.NextBytes32(), 5);
    EXPECT_NE(*InterpolateAtZero(Shares(p, 4, rng)), s);
  }
}

TEST(InterpolateTest, TauMinusOneSharesFitAnySecret) {
  // For every guessed secret there is a share at a fresh point that
  // completes the tau-1 known shares into a polynomial with that constant.
  SecureRandom rng = SecureRandom::ForStream(3, "shamir");
  const int tau = 4;
  SharingPolynomial p =
      SharingPolynomial::FromSeed(FieldElement::Random(rng), rng.NextBytes32(), tau);
  std::vector<KeyShare> pts = Shares(p, tau - 1, rng);
  pts.push_back({FieldElement::RandomNonZero(rng), FieldElement()});
  // Interpolation at zero is affine in the last y: f(y) = base + y * slope.
  FieldElement base = *InterpolateAtZero(pts);
  pts.back().y = FieldElement::One();
  FieldElement slope = *InterpolateAtZero(pts) - base;
  for (int g = 0; g < 5; ++g) {
    FieldElement guess = FieldElement::Random(rng);
    pts.back().y = (guess - base) * *slope.Inverse();
    EXPECT_EQ(*InterpolateAtZero(pts), guess);
  }
}

TEST(InterpolateTest, RejectsDegenerateInputs) {
  EXPECT_FALSE(InterpolateAtZero({}).ok());
  KeyShare zero{FieldElement(), FieldElement::One()};
  std::vector<KeyShare> with_zero = {zero};
  EXPECT_FALSE(InterpolateAtZero(with_zero).ok());
  KeyShare a{FieldElement::One(), FieldElement::One()};
  std::vector<KeyShare> dup = {a, a};
  EXPECT_FALSE(InterpolateAtZero(dup).ok());
}

}  // namespace
}  // namespace nebula
