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
#include "nebula/dp_params.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "gtest/gtest.h"
#include "nebula/random.h"

namespace nebula {
namespace {

DpBudget ReferenceBudget() {
  DpBudget b;
  b.eps_re = 1.0;
  b.delta_re = 1e-8;
  b.eps_unre = 1.0;
  b.delta_unre = 1e-8;
  b.alpha = 1.0 / 6.0;
  return b;
}

TEST(DeriveParamsTest, ReproducesReferenceInstantiation) {
  absl::StatusOr<DpParams> p = DeriveParams(ReferenceBudget());
  ASSERT_TRUE(p.ok());
  EXPECT_GE(p->sampling_rate, 0.1053);
  EXPECT_LE(p->sampling_rate, 0.1054);
  EXPECT_EQ(p->threshold, 20);
  EXPECT_DOUBLE_EQ(p->tsdlap_scale, 2.0);
  EXPECT_FALSE(p->threshold_overridden);
}

TEST(DeriveParamsTest, ShiftUsesNaturalLog) {
  // 2 + 2 ln(2e8) = 40.2277...
  double real = 2.0 + 2.0 * (std::log(2.0) + 8.0 * std::log(10.0));
  EXPECT_NEAR(real, 40.2277, 1e-4);
  EXPECT_EQ(DeriveParams(ReferenceBudget())->tsdlap_shift, 41);
}

TEST(DeriveParamsTest, ThresholdIsCeilingOfRealFormula) {
  double c = std::log(6.0) - 1.0 / (1.0 + 1.0 / 6.0);
  double real = std::log(1e8) / c;
  EXPECT_NEAR(real, 19.709, 1e-3);
  EXPECT_DOUBLE_EQ(DerivedThresholdReal(ReferenceBudget()), real);
}

TEST(DeriveParamsTest, SamplingRateApproachesOneForLargeEpsilon) {
  DpBudget b = ReferenceBudget();
  b.alpha = 1.0;
  b.eps_re = 40;
  ParamOverrides o;
  o.threshold = 20;  // C_alpha <= 0 at alpha = 1
  absl::StatusOr<DpParams> p = DeriveParams(b, o);
  ASSERT_TRUE(p.ok());
  EXPECT_NEAR(p->sampling_rate, 1.0, 1e-15);
}

TEST(DeriveParamsTest, OverridesReplaceAndAreRecorded) {
  ParamOverrides o;
  o.tsdlap_shift = 15;
  o.sampling_rate = 1.0;
  absl::StatusOr<DpParams> p = DeriveParams(ReferenceBudget(), o);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->tsdlap_shift, 15);
  EXPECT_TRUE(p->tsdlap_shift_overridden);
  EXPECT_DOUBLE_EQ(p->sampling_rate, 1.0);
  EXPECT_TRUE(p->sampling_rate_overridden);
  EXPECT_FALSE(p->threshold_overridden);
}

TEST(DeriveParamsTest, RejectsInvalidBudgets) {
  auto with = [](auto mutate) {
    DpBudget b = ReferenceBudget();
    mutate(b);
    return DeriveParams(b).status();
  };
  EXPECT_FALSE(with([](DpBudget& b) { b.eps_re = 0; }).ok());
  EXPECT_FALSE(with([](DpBudget& b) { b.eps_unre = -1; }).ok());
  EXPECT_FALSE(with([](DpBudget& b) { b.delta_re = 1; }).ok());
  EXPECT_FALSE(with([](DpBudget& b) { b.delta_unre = 0; }).ok());
  EXPECT_FALSE(with([](DpBudget& b) { b.alpha = 0; }).ok());
  EXPECT_FALSE(with([](DpBudget& b) { b.alpha = 1.5; }).ok());
  EXPECT_FALSE(with([](DpBudget& b) { b.eps_unre = 2; }).ok());
  EXPECT_FALSE(with([](DpBudget& b) { b.delta_unre = 1e-6; }).ok());
  EXPECT_FALSE(with([](DpBudget& b) { b.eps_re = NAN; }).ok());
  // alpha = 1 makes C_alpha negative; there is no valid derived threshold.
  EXPECT_EQ(with([](DpBudget& b) { b.alpha = 1; }).code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(DeriveParamsTest, RejectsInvalidOverrides) {
  ParamOverrides o;
  o.sampling_rate = 0;
  EXPECT_FALSE(DeriveParams(ReferenceBudget(), o).ok());
  o = {};
  o.threshold = 0;
  EXPECT_FALSE(DeriveParams(ReferenceBudget(), o).ok());
  o = {};
  o.tsdlap_scale = -2;
  EXPECT_FALSE(DeriveParams(ReferenceBudget(), o).ok());
}

TEST(DeriveParamsTest, RevealedPathBoundsHoldAcrossBudgets) {
  for (double eps : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (double alpha : {0.01, 0.1, 1.0 / 6, 0.3, 0.4}) {
      for (double delta : {1e-3, 1e-6, 1e-8, 1e-12}) {
        DpBudget b{eps, delta, eps, delta, alpha};
        absl::StatusOr<DpParams> p = DeriveParams(b);
        ASSERT_TRUE(p.ok()) << eps << " " << alpha << " " << delta;
        EXPECT_LE(p->sampling_rate, 1.0 - std::exp(-eps));
        double c_alpha = std::log(1 / alpha) - 1 / (1 + alpha);
        EXPECT_GE(p->threshold, std::log(1 / delta) / c_alpha);
      }
    }
  }
}

TEST(DeriveParamsTest, OverallGuaranteeIsMaxNotSum) {
  DpBudget b = ReferenceBudget();
  b.eps_unre = 0.5;
  b.delta_unre = 1e-9;
  DpParams p = *DeriveParams(b);
  EXPECT_DOUBLE_EQ(p.epsilon(), 1.0);
  EXPECT_DOUBLE_EQ(p.delta(), 1e-8);
}

TEST(DpParamsConfigTest, RoundTrips) {
  ParamOverrides o;
  o.tsdlap_shift = 15;
  DpParams p = *DeriveParams(ReferenceBudget(), o);
  absl::StatusOr<DpParams> q = DpParams::FromConfig(p.ToConfig());
  ASSERT_TRUE(q.ok()) << q.status();
  EXPECT_EQ(*q, p);
}

TEST(DpParamsConfigTest, RejectsTamperedDerivedValue) {
  DpParams p = *DeriveParams(ReferenceBudget());
  std::string config = p.ToConfig();
  size_t pos = config.find("threshold=20");
  ASSERT_NE(pos, std::string::npos);
  config.replace(pos, 12, "threshold=19");
  EXPECT_FALSE(DpParams::FromConfig(config).ok());
}

TEST(DpParamsConfigTest, MinimalConfigDerivesTheRest) {
  absl::StatusOr<DpParams> p =
      DpParams::FromConfig("eps_re=1\n# comment\nalpha=0.16666666666666666\n");
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->threshold, 20);
}

// Exact binomial pmf for small k.
double BinomialPmf(int k, int v, double p) {
  double c = 1;
  for (int i = 1; i <= v; ++i) c = c * (k - v + i) / i;
  return c * std::pow(1 - p, k - v) * std::pow(p, v);
}

TEST(RevealedPathTest, BinomialRatioIdentity) {
  for (double p : {0.01, 0.105, 0.5, 0.9}) {
    for (int k = 1; k <= 30; ++k) {
      for (int v = 0; v < k; ++v) {
        double ratio = BinomialPmf(k, v, p) / BinomialPmf(k - 1, v, p);
        double closed = (1 - p) * k / (k - v);
        EXPECT_NEAR(ratio / closed, 1.0, 1e-12) << k << " " << v << " " << p;
      }
    }
  }
}

TEST(RevealedPathTest, RatioWithinEpsilonBelowKq) {
  const double eps = 1.0;
  DpParams p = *DeriveParams(ReferenceBudget());
  double ps = p.sampling_rate;
  double q = 1 - std::exp(-eps) + std::exp(-eps) * ps;
  for (double logk = 0; logk <= 4.0; logk += 0.05) {
    int k = static_cast<int>(std::pow(10.0, logk));
    for (int v = 0; v < k && v <= k * q; ++v) {
      double ratio = (1 - ps) * k / (k - v);
      EXPECT_GE(ratio, std::exp(-eps) * (1 - 1e-12));
      EXPECT_LE(ratio, std::exp(eps) * (1 + 1e-12)) << k << " " << v;
    }
  }
}

class TsdlapTest : public ::testing::Test {
 protected:
  // A = 1 + 2 sum_{c=1..t} exp(-c / scale), evaluated directly.
  static double Normalizer(double scale, int t) {
    double a = 1;
    for (int c = 1; c <= t; ++c) a += 2 * std::exp(-c / scale);
    return a;
  }
};

TEST_F(TsdlapTest, PmfMatchesClosedForm) {
  double a = Normalizer(2.0, 15);
  EXPECT_NEAR(*TsdlapPmf(15, 2.0, 15), 1 / a, 1e-15);
  EXPECT_NEAR(*TsdlapPmf(10, 2.0, 15), std::exp(-2.5) / a, 1e-15);
  EXPECT_EQ(*TsdlapPmf(31, 2.0, 15), 0.0);
  EXPECT_EQ(*TsdlapPmf(-1, 2.0, 15), 0.0);
}

TEST_F(TsdlapTest, PmfSumsToOneAndIsSymmetric) {
  for (auto [scale, t] : std::vector<std::pair<double, int>>{
           {2.0, 15}, {0.5, 3}, {10.0, 41}, {1.0, 0}}) {
    TsdlapDistribution d = *TsdlapDistribution::Create(scale, t);
    double sum = 0;
    for (int c = 0; c <= 2 * t; ++c) sum += d.Pmf(c);
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (int dd = 0; dd <= t; ++dd) {
      EXPECT_DOUBLE_EQ(d.Pmf(t - dd), d.Pmf(t + dd));
    }
  }
}

TEST_F(TsdlapTest, RejectsBadParameters) {
  EXPECT_FALSE(TsdlapDistribution::Create(0, 15).ok());
  EXPECT_FALSE(TsdlapDistribution::Create(-1, 15).ok());
  EXPECT_FALSE(TsdlapDistribution::Create(2, -1).ok());
  EXPECT_FALSE(TsdlapPmf(0, 0, 15).ok());
}

TEST_F(TsdlapTest, SamplerMatchesPmf) {
  TsdlapDistribution d = *TsdlapDistribution::Create(2.0, 15);
  SecureRandom rng = SecureRandom::ForStream(1, "tsdlap");
  const int n = 1000000;
  std::vector<int> counts(31);
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    int c = d.Sample(rng);
    ASSERT_GE(c, 0);
    ASSERT_LE(c, 30);
    ++counts[c];
    sum += c;
  }
  double tv = 0, var = 0;
  for (int c = 0; c <= 30; ++c) {
    tv += std::abs(counts[c] / double(n) - d.Pmf(c));
    var += d.Pmf(c) * (c - 15) * (c - 15);
  }
  EXPECT_LT(tv / 2, 0.01);
  EXPECT_NEAR(sum / n, 15.0, 3 * std::sqrt(var / n));
}

TEST_F(TsdlapTest, SamplerIsDeterministicGivenSeed) {
  TsdlapDistribution d = *TsdlapDistribution::Create(2.0, 15);
  SecureRandom a = SecureRandom::ForStream(9, "tsdlap");
  SecureRandom b = SecureRandom::ForStream(9, "tsdlap");
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(d.Sample(a), d.Sample(b));
}

}  // namespace
}  // namespace nebula
