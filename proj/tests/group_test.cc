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

#include "nebula/group.h"

#include <string>

#include "gtest/gtest.h"
#include "nebula/field.h"
#include "nebula/hash.h"
#include "nebula/random.h"

namespace nebula {
namespace {

TEST(GroupElementTest, EncodingIs32BytesAndRoundTrips) {
  SecureRandom rng = SecureRandom::ForStream(1, "group");
  for (int i = 0; i < 50; ++i) {
    GroupElement p = *GroupElement::BaseMultiply(FieldElement::RandomNonZero(rng));
    std::string enc = p.Encode();
    ASSERT_EQ(enc.size(), 32u);
    absl::StatusOr<GroupElement> q = GroupElement::Decode(enc);
    ASSERT_TRUE(q.ok());
    EXPECT_EQ(*q, p);
  }
}

TEST(GroupElementTest, DecodeRejectsInvalidEncodings) {
  EXPECT_FALSE(GroupElement::Decode(std::string(32, '\xff')).ok());
  EXPECT_FALSE(GroupElement::Decode(std::string(31, '\x01')).ok());
  // The identity never appears in protocol messages.
  EXPECT_FALSE(GroupElement::Decode(std::string(32, '\0')).ok());
}

TEST(GroupElementTest, ScalarMultiplicationDistributesOverAddition) {
  SecureRandom rng = SecureRandom::ForStream(2, "group");
  FieldElement a = FieldElement::RandomNonZero(rng);
  FieldElement b = FieldElement::RandomNonZero(rng);
  GroupElement lhs = *GroupElement::BaseMultiply(a + b);
  GroupElement rhs = *GroupElement::BaseMultiply(a) + *GroupElement::BaseMultiply(b);
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(*GroupElement::BaseMultiply(FieldElement::One()),
            GroupElement::Generator());
}

TEST(GroupElementTest, MultiplyComposes) {
  SecureRandom rng = SecureRandom::ForStream(3, "group");
  GroupElement h = GroupElement::HashToGroup(domains::kHashToGroup, "x");
  FieldElement a = FieldElement::RandomNonZero(rng);
  FieldElement b = FieldElement::RandomNonZero(rng);
  EXPECT_EQ(*h.Multiply(a)->Multiply(b), *h.Multiply(a * b));
  EXPECT_EQ(*h.Multiply(a)->Multiply(*a.Inverse()), h);
}

TEST(GroupElementTest, HashToGroupIsDeterministicAndDomainSeparated) {
  GroupElement a = GroupElement::HashToGroup(domains::kHashToGroup, "value");
  EXPECT_EQ(a, GroupElement::HashToGroup(domains::kHashToGroup, "value"));
  EXPECT_NE(a, GroupElement::HashToGroup(domains::kHashToGroup, "value2"));
  EXPECT_NE(a, GroupElement::HashToGroup(domains::kOprfOutput, "value"));
  EXPECT_FALSE(a.IsIdentity());
}

TEST(GroupElementTest, MultiplyByZeroFails) {
  EXPECT_FALSE(GroupElement::Generator().Multiply(FieldElement()).ok());
  EXPECT_FALSE(GroupElement::BaseMultiply(FieldElement()).ok());
}

}  // namespace
}  // namespace nebula
