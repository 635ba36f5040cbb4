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

#include "nebula/aggregate.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "nebula/dummy.h"
#include "nebula/prefix.h"
#include "test_util.h"

namespace nebula {
namespace {

using ::nebula::testing::HonestSubmissions;
using ::nebula::testing::ParamsWithThreshold;

std::vector<Submission> Dataset(const std::map<std::string, int>& counts,
                                const DpParams& params, SecureRandom& rng) {
  std::vector<Submission> out;
  for (const auto& [value, n] : counts) {
    for (Submission& s : HonestSubmissions(value, n, params, rng)) {
      out.push_back(std::move(s));
    }
  }
  return out;
}

TEST(GroupByTagTest, EmptyInput) { EXPECT_TRUE(GroupByTag({}).empty()); }

TEST(GroupByTagTest, PartitionsAndIsOrderInsensitive) {
  SecureRandom rng = SecureRandom::ForStream(1, "group");
  DpParams params = ParamsWithThreshold(20);
  std::vector<Submission> subs = Dataset({{"a", 3}, {"b", 2}}, params, rng);
  std::vector<TagGroup> groups = GroupByTag(subs);
  ASSERT_EQ(groups.size(), 2u);
  std::multiset<size_t> sizes = {groups[0].submissions.size(),
                                 groups[1].submissions.size()};
  EXPECT_EQ(sizes, (std::multiset<size_t>{2, 3}));

  std::mt19937 shuffle(7);
  std::shuffle(subs.begin(), subs.end(), shuffle);
  std::vector<TagGroup> again = GroupByTag(subs);
  ASSERT_EQ(again.size(), 2u);
  for (int g = 0; g < 2; ++g) {
    EXPECT_EQ(again[g].tag, groups[g].tag);
    EXPECT_EQ(again[g].submissions.size(), groups[g].submissions.size());
  }
}

TEST(RecoverGroupTest, ExactlyThresholdRecovers) {
  SecureRandom rng = SecureRandom::ForStream(2, "recover");
  DpParams params = ParamsWithThreshold(20);
  std::vector<TagGroup> g = GroupByTag(HonestSubmissions("x", 20, params, rng));
  RecoveryResult r = RecoverGroup(g[0], 20);
  ASSERT_TRUE(std::holds_alternative<Recovered>(r));
  EXPECT_EQ(std::get<Recovered>(r).value, "x");
  EXPECT_EQ(std::get<Recovered>(r).count, 20u);
}

TEST(RecoverGroupTest, BelowThresholdIsUnrevealed) {
  SecureRandom rng = SecureRandom::ForStream(3, "recover");
  DpParams params = ParamsWithThreshold(20);
  std::vector<TagGroup> g = GroupByTag(HonestSubmissions("x", 19, params, rng));
  RecoveryResult r = RecoverGroup(g[0], 20);
  ASSERT_TRUE(std::holds_alternative<Unrevealed>(r));
  EXPECT_EQ(std::get<Unrevealed>(r).count, 19u);
}

TEST(RecoverGroupTest, ForcedDummyGroupIsMalformed) {
  SecureRandom rng = SecureRandom::ForStream(4, "recover");
  TagGroup g{rng.NextBytes32(), MakeDummyGroup(Bytes32{}, 20, 3, rng)};
  for (Submission& s : g.submissions) s.tag = g.tag;
  RecoveryResult r = RecoverGroup(g, 20);
  ASSERT_TRUE(std::holds_alternative<Malformed>(r));
  EXPECT_EQ(std::get<Malformed>(r).count, 20u);
}

TEST(RecoverGroupTest, CiphertextMismatchIsMalformed) {
  SecureRandom rng = SecureRandom::ForStream(5, "recover");
  DpParams params = ParamsWithThreshold(5);
  std::vector<TagGroup> g = GroupByTag(HonestSubmissions("x", 8, params, rng));
  g[0].submissions[7].ciphertext[3] ^= 1;
  EXPECT_TRUE(std::holds_alternative<Malformed>(RecoverGroup(g[0], 5)));
}

TEST(RecoverGroupTest, CorruptShareIsMalformed) {
  SecureRandom rng = SecureRandom::ForStream(6, "recover");
  DpParams params = ParamsWithThreshold(5);
  std::vector<TagGroup> g = GroupByTag(HonestSubmissions("x", 5, params, rng));
  g[0].submissions[2].share.y = g[0].submissions[2].share.y + FieldElement::One();
  EXPECT_TRUE(std::holds_alternative<Malformed>(RecoverGroup(g[0], 5)));
}

TEST(RecoverGroupTest, DuplicatePointsAreSkipped) {
  SecureRandom rng = SecureRandom::ForStream(7, "recover");
  DpParams params = ParamsWithThreshold(5);
  std::vector<Submission> subs = HonestSubmissions("x", 5, params, rng);
  subs.push_back(subs[0]);
  std::vector<TagGroup> g = GroupByTag(subs);
  RecoveryResult r = RecoverGroup(g[0], 5);
  ASSERT_TRUE(std::holds_alternative<Recovered>(r));
  EXPECT_EQ(std::get<Recovered>(r).count, 6u);
  // Only four distinct points among five members.
  subs.resize(4);
  subs.push_back(subs[0]);
  g = GroupByTag(subs);
  EXPECT_TRUE(std::holds_alternative<Malformed>(RecoverGroup(g[0], 5)));
}

TEST(BuildReportTest, DeterministicThreshold) {
  SecureRandom rng = SecureRandom::ForStream(8, "report");
  DpParams params = ParamsWithThreshold(20);
  HistogramReport r =
      BuildReport(GroupByTag(Dataset({{"a", 25}, {"b", 5}}, params, rng)), params);
  EXPECT_EQ(r.revealed, (std::map<std::string, uint64_t>{{"a", 25}}));
  EXPECT_EQ(r.unrevealed_multiplicities, (std::map<int, uint64_t>{{5, 1}}));
  EXPECT_EQ(r.malformed_groups, 0u);
}

TEST(BuildReportTest, NeighboringDatasetsDifferByTwo) {
  SecureRandom rng = SecureRandom::ForStream(9, "report");
  DpParams params = ParamsWithThreshold(4);
  HistogramReport d =
      BuildReport(GroupByTag(Dataset({{"a", 2}, {"b", 1}}, params, rng)), params);
  HistogramReport d2 =
      BuildReport(GroupByTag(Dataset({{"a", 1}, {"b", 1}}, params, rng)), params);
  EXPECT_EQ(d.unrevealed_multiplicities, (std::map<int, uint64_t>{{1, 1}, {2, 1}}));
  EXPECT_EQ(d2.unrevealed_multiplicities, (std::map<int, uint64_t>{{1, 2}}));
}

TEST(BuildReportTest, DummiesOnlyTouchUnrevealed) {
  SecureRandom rng = SecureRandom::ForStream(10, "report");
  DpParams params = ParamsWithThreshold(6);
  std::vector<Submission> real =
      Dataset({{"a", 9}, {"b", 6}, {"c", 2}}, params, rng);
  HistogramReport base = BuildReport(GroupByTag(real), params);
  DummyBatch batch = *CreateDummyBatch(params, rng);
  std::vector<Submission> mixed = real;
  for (const Submission& s : batch.submissions()) mixed.push_back(s);
  HistogramReport noisy = BuildReport(GroupByTag(mixed), params);
  EXPECT_EQ(noisy.revealed, base.revealed);
  EXPECT_EQ(noisy.malformed_groups, 0u);
  uint64_t base_tags = 0, noisy_tags = 0;
  for (const auto& [i, n] : base.unrevealed_multiplicities) base_tags += n;
  for (const auto& [i, n] : noisy.unrevealed_multiplicities) noisy_tags += n;
  EXPECT_EQ(noisy_tags, base_tags + batch.groups().size());
}

TEST(BuildReportTest, ExactAtFullSamplingWithoutDummies) {
  SecureRandom rng = SecureRandom::ForStream(11, "report");
  DpParams params = ParamsWithThreshold(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::string, int> counts;
    int distinct = 1 + rng.UniformInt(8);
    for (int v = 0; v < distinct; ++v) {
      counts["v" + std::to_string(v)] = 1 + rng.UniformInt(9);
    }
    HistogramReport r = BuildReport(GroupByTag(Dataset(counts, params, rng)), params);
    std::map<std::string, uint64_t> expected;
    std::map<int, uint64_t> expected_unrevealed;
    for (const auto& [v, n] : counts) {
      if (n >= 4) expected[v] = n;
      else ++expected_unrevealed[n];
    }
    EXPECT_EQ(r.revealed, expected);
    EXPECT_EQ(r.unrevealed_multiplicities, expected_unrevealed);
  }
}

TEST(ReportCsvTest, IngestionOrderDoesNotChangeBytes) {
  SecureRandom rng = SecureRandom::ForStream(12, "csv");
  DpParams params = ParamsWithThreshold(3);
  std::vector<Submission> subs =
      Dataset({{"a", 5}, {"b", 3}, {"c", 2}, {"d", 1}}, params, rng);
  std::string first = ReportToCsv(BuildReport(GroupByTag(subs), params));
  std::mt19937 shuffle(3);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(subs.begin(), subs.end(), shuffle);
    EXPECT_EQ(ReportToCsv(BuildReport(GroupByTag(subs), params)), first);
  }
}

TEST(ReportCsvTest, RoundTripsArbitraryBytes) {
  HistogramReport r;
  r.params = ParamsWithThreshold(20);
  r.revealed = {{"plain", 21},
                {std::string("a,b\"c%d|e!f g\n", 14), 30},
                {std::string("\0\xff", 2), 20},
                {"", 25}};
  r.unrevealed_multiplicities = {{1, 400}, {19, 2}};
  r.malformed_groups = 1;
  r.malformed_members = 22;
  std::string csv = ReportToCsv(r);
  absl::StatusOr<HistogramReport> back = ParseReportCsv(csv);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, r);
  EXPECT_EQ(ReportToCsv(*back), csv);
}

TEST(ReportCsvTest, LayeredValuesRenderAsAttributes) {
  HistogramReport r;
  r.layer = 2;
  r.dummy_noise = false;
  r.params = ParamsWithThreshold(20);
  r.revealed[*EncodePrefix({"F", "married"})] = 20;
  r.revealed[*EncodePrefix({"a|b", ""})] = 30;
  r.revealed["\x01"] = 40;  // not a valid two-attribute prefix
  std::string csv = ReportToCsv(r);
  EXPECT_NE(csv.find("F|married,20\n"), std::string::npos);
  EXPECT_NE(csv.find("a%7Cb|,30\n"), std::string::npos);
  absl::StatusOr<std::vector<HistogramReport>> back = ParseReportsCsv(csv + csv);
  ASSERT_TRUE(back.ok()) << back.status();
  ASSERT_EQ(back->size(), 2u);
  EXPECT_EQ((*back)[0], r);
}

TEST(ReportCsvTest, RejectsGarbage) {
  EXPECT_FALSE(ParseReportCsv("").ok());
  EXPECT_FALSE(ParseReportCsv("value,count\n").ok());
  HistogramReport r;
  r.params = ParamsWithThreshold(20);
  std::string csv = ReportToCsv(r);
  EXPECT_FALSE(ParseReportCsv(csv.substr(0, csv.size() - 4)).ok());
  EXPECT_FALSE(PercentDecode("%4").ok());
  EXPECT_FALSE(PercentDecode("%zz").ok());
}

TEST(AggregatorTest, ConcurrentIngestMatchesBatchDecode) {
  SecureRandom rng = SecureRandom::ForStream(13, "aggregator");
  DpParams params = ParamsWithThreshold(5);
  std::vector<Submission> subs =
      Dataset({{"a", 50}, {"b", 7}, {"c", 4}, {"d", 1}}, params, rng);
  Aggregator agg(params);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (size_t i = t; i < subs.size(); i += 4) ASSERT_TRUE(agg.Add(subs[i]).ok());
    });
  }
  for (std::thread& t : threads) t.join();
  EXPECT_EQ(agg.size(), subs.size());
  EXPECT_FALSE(agg.Decode().ok());  // not sealed
  agg.Seal();
  EXPECT_EQ(agg.Add(subs[0]).code(), absl::StatusCode::kFailedPrecondition);
  absl::StatusOr<HistogramReport> report = agg.Decode();
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(*report, BuildReport(GroupByTag(subs), params));
}

TEST(AggregatorTest, EmptyLogGivesEmptyReport) {
  Aggregator agg(ParamsWithThreshold(20));
  agg.Seal();
  absl::StatusOr<HistogramReport> report = agg.Decode();
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(report->revealed.empty());
  EXPECT_TRUE(report->unrevealed_multiplicities.empty());
}

}  // namespace
}  // namespace nebula
