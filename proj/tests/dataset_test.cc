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

#include "nebula/dataset.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nebula/prefix.h"

namespace nebula {
namespace {

using ::testing::ElementsAre;
using ::testing::SizeIs;

TEST(NormalizeTokenTest, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(NormalizeToken("Hamlet,"), "hamlet");
  EXPECT_EQ(NormalizeToken("'Tis"), "tis");
  EXPECT_EQ(NormalizeToken("o'er-wrought!"), "oerwrought");
  EXPECT_EQ(NormalizeToken("--"), "");
}

TEST(BinTokenTest, MatchesLowDigestBits) {
  // Low bits of the last 8 bytes of SHA-256, computed with hashlib.
  EXPECT_EQ(BinToken("hamlet", 6), "20");
  EXPECT_EQ(BinToken("hamlet", 20), "866260");
  EXPECT_EQ(BinToken("the", 6), "16");
  EXPECT_EQ(BinToken("the", 20), "345296");
}

TEST(BinTokenTest, StaysInDomain) {
  std::vector<std::string> domain = BinDomain(6);
  ASSERT_THAT(domain, SizeIs(64));
  std::set<std::string> allowed(domain.begin(), domain.end());
  for (int i = 0; i < 500; ++i) {
    EXPECT_TRUE(allowed.contains(BinToken(absl::StrCat("w", i), 6)));
  }
}

TEST(CorpusTest, TokenizesOnWhitespace) {
  auto d = CorpusFromText("To be, or not\tto BE!\n -- ");
  ASSERT_TRUE(d.ok()) << d.status();
  ASSERT_EQ(d->attribute_count(), 1);
  std::vector<std::string> tokens;
  for (const auto& r : d->records) tokens.push_back(r[0]);
  EXPECT_THAT(tokens, ElementsAre("to", "be", "or", "not", "to", "be"));
  EXPECT_TRUE(d->domain.empty());
}

TEST(CorpusTest, BinnedCorpusDeclaresDomain) {
  auto d = CorpusFromText("Hamlet, the prince", 6);
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_THAT(d->domain, SizeIs(64));
  EXPECT_EQ(d->records[0][0], "20");
  EXPECT_FALSE(CorpusFromText("x", 0).ok());
}

TEST(CorpusTest, EmptyTextGivesEmptyDataset) {
  auto d = CorpusFromText("");
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d->size(), 0u);
}

TEST(CsvTest, ParsesQuotedFields) {
  auto rows = ParseCsv("a,b\n\"x,1\",\"say \"\"hi\"\"\"\r\n");
  ASSERT_TRUE(rows.ok()) << rows.status();
  ASSERT_THAT(*rows, SizeIs(2));
  EXPECT_THAT((*rows)[1], ElementsAre("x,1", "say \"hi\""));
  EXPECT_FALSE(ParseCsv("a,\"b\n").ok());
}

TEST(CsvTest, SelectsColumnsInRequestedOrder) {
  std::vector<std::string> cols = {"age", "sex"};
  auto d = CsvAttributesFromText("sex,age,zip\nF,30,1\nM,41,2\n", cols);
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_EQ(d->attribute_count(), 2);
  ASSERT_EQ(d->size(), 2u);
  EXPECT_THAT(d->records[0], ElementsAre("30", "F"));
  EXPECT_THAT(d->records[1], ElementsAre("41", "M"));
}

TEST(CsvTest, MissingColumnIsAnError) {
  std::vector<std::string> cols = {"income"};
  EXPECT_FALSE(CsvAttributesFromText("sex,age\nF,30\n", cols).ok());
}

TEST(CsvTest, HeaderOnlyIsEmpty) {
  std::vector<std::string> cols = {"sex"};
  auto d = CsvAttributesFromText("sex,age\n", cols);
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_EQ(d->size(), 0u);
  EXPECT_EQ(d->attribute_count(), 1);
}

TEST(GeoTest, CoarseGrainsDigitByDigit) {
  auto loc = CoarseGrainLocation("US", 40.712776, -74.005974);
  ASSERT_TRUE(loc.ok()) << loc.status();
  EXPECT_THAT(*loc, ElementsAre("US", "40,-74", "7,0", "1,0", "2,5", "7,9",
                                "7,7", "6,4"));
  EXPECT_FALSE(CoarseGrainLocation("US", 91, 0).ok());
}

TEST(GeoTest, EightAttributesPerCheckin) {
  auto d = GeoFromCsvText("c,lat,lon\nFR,48.8566,2.3522\nFR,48.8567,2.3522\n",
                          "c", "lat", "lon");
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_EQ(d->attribute_count(), kGeoAttributes);
  auto h5 = PrefixHistogram(*d, 5);
  auto h6 = PrefixHistogram(*d, 6);
  ASSERT_TRUE(h5.ok() && h6.ok());
  EXPECT_THAT(*h5, SizeIs(1));
  EXPECT_THAT(*h6, SizeIs(2));
}

TEST(SyntheticTest, ZipfIsDeterministicAndSized) {
  ZipfSpec spec{.tokens = 5000, .vocabulary = 300, .exponent = 1.0};
  Dataset a = SyntheticZipfCorpus(spec, 7);
  Dataset b = SyntheticZipfCorpus(spec, 7);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.size(), 5000u);
  auto h = PrefixHistogram(a, 1);
  ASSERT_TRUE(h.ok());
  EXPECT_LE(h->size(), 300u);
  uint64_t top = 0;
  for (const auto& [v, c] : *h) top = std::max(top, c);
  // Rank 1 of a Zipf(1) law over 300 words carries about 16% of the mass.
  EXPECT_GT(top, 5000 * 0.12);
  EXPECT_LT(top, 5000 * 0.21);
}

TEST(SyntheticTest, CensusAndGeoShapes) {
  Dataset census = SyntheticCensus(1000, 3);
  EXPECT_EQ(census.size(), 1000u);
  EXPECT_EQ(census.attribute_count(), 5);
  Dataset geo = SyntheticGeo(1000, 3);
  EXPECT_EQ(geo.size(), 1000u);
  EXPECT_EQ(geo.attribute_count(), kGeoAttributes);
}

TEST(LoadDatasetTest, ParsesSpecs) {
  auto z = LoadDataset("synthetic:zipf:tokens=100,vocab=10", 4, 1);
  ASSERT_TRUE(z.ok()) << z.status();
  EXPECT_EQ(z->size(), 100u);
  EXPECT_THAT(z->domain, SizeIs(16));
  EXPECT_FALSE(LoadDataset("synthetic:zipf:bogus=1").ok());
  EXPECT_FALSE(LoadDataset("synthetic:nothing").ok());
  EXPECT_FALSE(LoadDataset("synthetic:census:n=10", 4).ok());
  EXPECT_FALSE(LoadDataset("/no/such/file").ok());

  std::string path = absl::StrCat(::testing::TempDir(), "nebula_ds_", getpid(),
                                  ".csv");
  std::ofstream(path) << "a,b\n1,2\n3,4\n";
  auto csv = LoadDataset(absl::StrCat("csv:", path, ":b,a"));
  ASSERT_TRUE(csv.ok()) << csv.status();
  EXPECT_THAT(csv->records[1], ElementsAre("4", "3"));
  std::filesystem::remove(path);
}

TEST(PrefixHistogramTest, CountsEncodedPrefixes) {
  Dataset d;
  d.records = {{"a", "x"}, {"a", "y"}, {"b", "x"}};
  auto h1 = PrefixHistogram(d, 1);
  ASSERT_TRUE(h1.ok());
  EXPECT_EQ(h1->at(*EncodePrefix({"a"})), 2u);
  auto h2 = PrefixHistogram(d, 2);
  ASSERT_TRUE(h2.ok());
  EXPECT_THAT(*h2, SizeIs(3));
  EXPECT_FALSE(PrefixHistogram(d, 3).ok());
}

}  // namespace
}  // namespace nebula
