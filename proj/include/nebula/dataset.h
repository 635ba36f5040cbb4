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

// Datasets for experiments: a list of records, each a fixed-length list of
// attribute values, plus loaders for text corpora and CSV files and
// synthetic generators standing in for data that cannot be shipped.

#ifndef NEBULA_DATASET_H_
#define NEBULA_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace nebula {

struct Dataset {
  std::vector<std::string> schema;
  std::vector<std::vector<std::string>> records;
  std::string source;
  // Every possible value, when it is known up front (hash-binned data).
  // Otherwise the baselines treat the observed values as the domain.
  std::vector<std::string> domain;

  size_t size() const { return records.size(); }
  int attribute_count() const {
    return records.empty() ? static_cast<int>(schema.size())
                           : static_cast<int>(records.front().size());
  }
};

// Lowercases ASCII letters and drops ASCII punctuation. May return "".
std::string NormalizeToken(std::string_view token);
// Decimal value of the low `bits` bits of SHA-256(token), reading the
// digest as a big-endian integer. 1 <= bits <= 32.
std::string BinToken(std::string_view token, int bits);
std::vector<std::string> BinDomain(int bits);

// Whitespace-split, normalized tokens; one single-attribute record each.
absl::StatusOr<Dataset> CorpusFromText(std::string_view text,
                                       std::optional<int> bin_bits = {});
absl::StatusOr<Dataset> LoadCorpus(const std::string& path,
                                   std::optional<int> bin_bits = {});

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF.
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    std::string_view text);

// Header row required. Attributes come out in `columns` order.
absl::StatusOr<Dataset> CsvAttributesFromText(
    std::string_view text, absl::Span<const std::string> columns);
absl::StatusOr<Dataset> LoadCsvAttributes(
    const std::string& path, absl::Span<const std::string> columns);

// Eight attributes of increasing precision: country code, the integer
// degrees "lat,lon", then the first six decimal digits of latitude and
// longitude as pairs "d,d".
inline constexpr int kGeoAttributes = 8;
absl::StatusOr<std::vector<std::string>> CoarseGrainLocation(
    std::string_view country, double latitude, double longitude);
absl::StatusOr<Dataset> GeoFromCsvText(std::string_view text,
                                       const std::string& country_column,
                                       const std::string& latitude_column,
                                       const std::string& longitude_column);
absl::StatusOr<Dataset> LoadGeoCsv(const std::string& path,
                                   const std::string& country_column,
                                   const std::string& latitude_column,
                                   const std::string& longitude_column);

struct ZipfSpec {
  size_t tokens = 832301;
  size_t vocabulary = 29257;
  double exponent = 1.0;
};
// Word-frequency stand-in: tokens drawn i.i.d. from Zipf(exponent) over
// `vocabulary` distinct words.
Dataset SyntheticZipfCorpus(const ZipfSpec& spec, uint64_t seed,
                            std::optional<int> bin_bits = {});

// Census-like persons with attributes SEX, MARST, RACE, EDUC, AGE, where
// marital status and education depend on age.
Dataset SyntheticCensus(size_t persons, uint64_t seed);

// Check-ins at venues clustered around cities, coarse-grained into
// kGeoAttributes attributes.
Dataset SyntheticGeo(size_t checkins, uint64_t seed);

// Resolves a dataset description:
//   <path>                               text corpus
//   csv:<path>:<col>[,<col>...]          CSV attributes
//   geo:<path>:<country>,<lat>,<lon>     coarse-grained locations
//   synthetic:zipf[:tokens=N,vocab=V,s=X]
//   synthetic:census[:n=N]
//   synthetic:geo[:n=N]
// bin_bits applies to single-attribute datasets only.
absl::StatusOr<Dataset> LoadDataset(std::string_view spec,
                                    std::optional<int> bin_bits = {},
                                    uint64_t seed = 0);

// Counts of every length-`prefix_length` prefix, keyed by EncodePrefix.
absl::StatusOr<std::map<std::string, uint64_t>> PrefixHistogram(
    const Dataset& dataset, int prefix_length);

}  // namespace nebula

#endif  // NEBULA_DATASET_H_
