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

#include "nebula/field.h"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nebula/random.h"

namespace nebula {
namespace {

// Little-endian encoding of the group order l = 2^252 + 27742317777372353535851937790883648493.
constexpr std::array<uint8_t, 32> kOrder = {
    0xed, 0xd3, 0xf5, 0x5c, 0x1a, 0x63, 0x12, 0x58, 0xd6, 0x9c, 0xf7,
    0xa2, 0xde, 0xf9, 0xde, 0x14, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10};

std::string Bytes(const std::array<uint8_t, 32>& a) {
  return std::string(reinterpret_cast<const char*>(a.data()), a.size());
}

TEST(FieldElementTest, SmallIntegerArithmeticMatchesMachineIntegers) {
  SecureRandom rng = SecureRandom::ForStream(1, "field");
  for (int i = 0; i < 200; ++i) {
    uint64_t a = rng() >> 33;
    uint64_t b = rng() >> 33;
    EXPECT_EQ(FieldElement::FromUint64(a) * FieldElement::FromUint64(b),
              FieldElement::FromUint64(a * b));
    EXPECT_EQ(FieldElement::FromUint64(a) + FieldElement::FromUint64(b),
              FieldElement::FromUint64(a + b));
    if (a >= b) {
      EXPECT_EQ(FieldElement::FromUint64(a) - FieldElement::FromUint64(b),
                FieldElement::FromUint64(a - b));
    }
  }
}

TEST(FieldElementTest, MinusOneEncodesAsOrderMinusOne) {
  std::array<uint8_t, 32> expected = kOrder;
  expected[0] -= 1;
  EXPECT_EQ(FieldElement::One().Negate().Encode(), Bytes(expected));
  EXPECT_EQ(FieldElement::One().Negate() * FieldElement::One().Negate(),
            FieldElement::One());
}

TEST(FieldElementTest, DecodeRejectsNonCanonical) {
  EXPECT_FALSE(FieldElement::Decode(Bytes(kOrder)).ok());
  EXPECT_FALSE(FieldElement::Decode(std::string(32, '\xff')).ok());
  EXPECT_FALSE(FieldElement::Decode(std::string(31, '\0')).ok());
  std::array<uint8_t, 32> below = kOrder;
  below[0] -= 1;
  EXPECT_TRUE(FieldElement::Decode(Bytes(below)).ok());
}

TEST(FieldElementTest, EncodeDecodeRoundTrip) {
  SecureRandom rng = SecureRandom::ForStream(2, "field");
  for (int i = 0; i < 100; ++i) {
    FieldElement x = FieldElement::Random(rng);
    absl::StatusOr<FieldElement> y = FieldElement::Decode(x.Encode());
    ASSERT_TRUE(y.ok());
    EXPECT_EQ(*y, x);
  }
}

TEST(FieldElementTest, InverseOfZeroFails) {
  EXPECT_FALSE(FieldElement().Inverse().ok());
}

TEST(FieldElementTest, InverseTimesSelfIsOne) {
  SecureRandom rng = SecureRandom::ForStream(3, "field");
  for (int i = 0; i < 50; ++i) {
    FieldElement x = FieldElement::RandomNonZero(rng);
    absl::StatusOr<FieldElement> inv = x.Inverse();
    ASSERT_TRUE(inv.ok());
    EXPECT_EQ(x * *inv, FieldElement::One());
  }
}

TEST(FieldElementTest, BatchInverseMatchesIndividualInverses) {
  SecureRandom rng = SecureRandom::ForStream(4, "field");
  std::vector<FieldElement> xs;
  for (int i = 0; i < 17; ++i) xs.push_back(FieldElement::RandomNonZero(rng));
  absl::StatusOr<std::vector<FieldElement>> inv = BatchInverse(xs);
  ASSERT_TRUE(inv.ok());
  ASSERT_EQ(inv->size(), xs.size());
  for (size_t i = 0; i < xs.size(); ++i) EXPECT_EQ((*inv)[i], *xs[i].Inverse());
}

TEST(FieldElementTest, BatchInverseRejectsZero) {
  std::vector<FieldElement> xs = {FieldElement::One(), FieldElement()};
  EXPECT_FALSE(BatchInverse(xs).ok());
  EXPECT_TRUE(BatchInverse({}).ok());
}

TEST(FieldElementTest, RandomNonZeroIsNonZero) {
  SecureRandom rng = SecureRandom::ForStream(5, "field");
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(FieldElement::RandomNonZero(rng).IsZero());
  }
}

}  // namespace
}  // namespace nebula
