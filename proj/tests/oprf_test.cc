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
#include "nebula/oprf.h"

#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "nebula/hash.h"

namespace nebula {
namespace {

Bytes32 Seed(uint8_t b) {
  Bytes32 s{};
  s.fill(b);
  return s;
}

// Independent evaluation of H2(HashToGroup(x)^msk || x).
Bytes32 Oracle(std::string_view x, const FieldElement& msk) {
  GroupElement w =
      *GroupElement::HashToGroup(domains::kHashToGroup, x).Multiply(msk);
  return HashToBytes32(domains::kOprfOutput, {AsStringView(w.bytes()), x});
}

TEST(KeygenTest, DeterministicAndConsistent) {
  ServerKeypair a = ServerKeypair::FromSeed(Seed(1));
  ServerKeypair b = ServerKeypair::FromSeed(Seed(1));
  ServerKeypair c = ServerKeypair::FromSeed(Seed(2));
  EXPECT_EQ(a.secret_key, b.secret_key);
  EXPECT_NE(a.secret_key, c.secret_key);
  EXPECT_EQ(*GroupElement::BaseMultiply(a.secret_key), a.public_key);
}

TEST(BlindTest, RejectsEmptyInput) {
  SecureRandom rng = SecureRandom::ForStream(1, "blind");
  EXPECT_FALSE(Blind("", rng).ok());
}

TEST(BlindTest, UnitBlindIsHashToGroup) {
  absl::StatusOr<BlindedInput> b = BlindWithScalar("x", FieldElement::One());
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b->element, GroupElement::HashToGroup(domains::kHashToGroup, "x"));
}

TEST(BlindTest, FreshBlindsNeverRepeat) {
  SecureRandom rng = SecureRandom::ForStream(2, "blind");
  std::set<Bytes32> seen;
  for (int i = 0; i < 10000; ++i) {
    seen.insert(Blind("same value", rng)->element.bytes());
  }
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(EvaluateTest, GeneratorMapsToPublicKey) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(3));
  std::vector<GroupElement> in = {GroupElement::Generator()};
  absl::StatusOr<Evaluation> ev = Evaluate(in, kp);
  ASSERT_TRUE(ev.ok());
  EXPECT_EQ(ev->elements[0], kp.public_key);
  EXPECT_TRUE(VerifyEvaluation(in, *ev, kp.public_key).ok());
}

TEST(EvaluateTest, BatchLimits) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(4));
  std::vector<GroupElement> nine(9, GroupElement::Generator());
  EXPECT_FALSE(Evaluate(nine, kp).ok());
  EXPECT_FALSE(Evaluate({}, kp).ok());
  std::vector<GroupElement> eight(8, GroupElement::Generator());
  absl::StatusOr<Evaluation> ev = Evaluate(eight, kp);
  ASSERT_TRUE(ev.ok());
  EXPECT_EQ(ev->elements.size(), 8u);
  EXPECT_EQ(ev->proof.Encode().size(), 64u);
}

TEST(FinalizeTest, MatchesDirectEvaluation) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(5));
  SecureRandom rng = SecureRandom::ForStream(5, "finalize");
  for (const char* x : {"a", "hamlet", "UK|iOS"}) {
    BlindedInput b = *Blind(x, rng);
    Evaluation ev = *Evaluate({b.element}, kp);
    absl::StatusOr<Bytes32> r = Finalize(b, ev, kp.public_key);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(*r, Oracle(x, kp.secret_key));
    EXPECT_EQ(*r, EvaluateUnblinded(x, kp.secret_key));
  }
}

TEST(FinalizeTest, TwoClientsSameValueSameOutput) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(6));
  LocalRandomnessService service(kp);
  SecureRandom rng1 = SecureRandom::ForStream(1, "client");
  SecureRandom rng2 = SecureRandom::ForStream(2, "client");
  std::vector<std::string> x = {"shared"};
  EXPECT_EQ(*ObtainRandomness(service, x, rng1),
            *ObtainRandomness(service, x, rng2));
}

TEST(FinalizeTest, DifferentKeysDifferentOutputs) {
  ServerKeypair a = ServerKeypair::FromSeed(Seed(7));
  ServerKeypair b = ServerKeypair::FromSeed(Seed(8));
  EXPECT_NE(EvaluateUnblinded("x", a.secret_key),
            EvaluateUnblinded("x", b.secret_key));
}

TEST(FinalizeTest, ObtainRandomnessChunksLargeRequests) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(9));
  LocalRandomnessService service(kp);
  SecureRandom rng = SecureRandom::ForStream(9, "client");
  std::vector<std::string> xs;
  for (int i = 0; i < 19; ++i) xs.push_back("v" + std::to_string(i));
  absl::StatusOr<std::vector<Bytes32>> r = ObtainRandomness(service, xs, rng);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->size(), xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    EXPECT_EQ((*r)[i], Oracle(xs[i], kp.secret_key));
  }
}

TEST(VerifyTest, RejectsEveryProofByteFlip) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(10));
  SecureRandom rng = SecureRandom::ForStream(10, "tamper");
  BlindedInput b = *Blind("x", rng);
  Evaluation ev = *Evaluate({b.element}, kp);
  std::string proof = ev.proof.Encode();
  for (size_t i = 0; i < proof.size(); ++i) {
    std::string t = proof;
    t[i] ^= 0x01;
    absl::StatusOr<DleqProof> p = DleqProof::Decode(t);
    if (!p.ok()) continue;  // non-canonical scalar, rejected at parse
    Evaluation bad = ev;
    bad.proof = *p;
    EXPECT_FALSE(Finalize(b, bad, kp.public_key).ok()) << "byte " << i;
  }
}

TEST(VerifyTest, RejectsTamperedEvaluation) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(11));
  SecureRandom rng = SecureRandom::ForStream(11, "tamper");
  BlindedInput b = *Blind("x", rng);
  Evaluation ev = *Evaluate({b.element}, kp);
  std::string z = ev.elements[0].Encode();
  for (size_t i = 0; i < z.size(); ++i) {
    std::string t = z;
    t[i] ^= 0x01;
    absl::StatusOr<GroupElement> e = GroupElement::Decode(t);
    if (!e.ok()) continue;
    Evaluation bad = ev;
    bad.elements[0] = *e;
    EXPECT_FALSE(Finalize(b, bad, kp.public_key).ok()) << "byte " << i;
  }
}

TEST(VerifyTest, RejectsWrongPublicKey) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(12));
  ServerKeypair other = ServerKeypair::FromSeed(Seed(13));
  SecureRandom rng = SecureRandom::ForStream(12, "tamper");
  BlindedInput b = *Blind("x", rng);
  Evaluation ev = *Evaluate({b.element}, kp);
  absl::Status s = VerifyEvaluation({b.element}, ev, other.public_key);
  EXPECT_EQ(s.code(), absl::StatusCode::kPermissionDenied);
}

TEST(VerifyTest, BatchProofBindsEveryElement) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(14));
  SecureRandom rng = SecureRandom::ForStream(14, "batch");
  std::vector<BlindedInput> in;
  std::vector<GroupElement> elems;
  for (int i = 0; i < 8; ++i) {
    in.push_back(*Blind("attr" + std::to_string(i), rng));
    elems.push_back(in.back().element);
  }
  Evaluation ev = *Evaluate(elems, kp);
  ASSERT_TRUE(Finalize(in, ev, kp.public_key).ok());
  for (int i = 0; i < 8; ++i) {
    Evaluation bad = ev;
    std::swap(bad.elements[i], bad.elements[(i + 1) % 8]);
    EXPECT_FALSE(Finalize(in, bad, kp.public_key).ok());
  }
}

TEST(FinalizeWithoutVerificationTest, SameOutputAsVerifiedPath) {
  ServerKeypair kp = ServerKeypair::FromSeed(Seed(15));
  SecureRandom rng = SecureRandom::ForStream(15, "noverify");
  BlindedInput b = *Blind("x", rng);
  Evaluation ev = *Evaluate({b.element}, kp);
  EXPECT_EQ((*FinalizeWithoutVerification({b}, ev))[0],
            *Finalize(b, ev, kp.public_key));
}

}  // namespace
}  // namespace nebula
