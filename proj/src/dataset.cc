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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "nebula/hash.h"
#include "nebula/prefix.h"
#include "nebula/random.h"
#include "nebula/status_macros.h"
#include "nebula/strings.h"

namespace nebula {

namespace {

absl::StatusOr<std::string> ReadWholeFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("error reading ", path));
  return buffer.str();
}

absl::Status CheckBinBits(int bits) {
  if (bits < 1 || bits > 32) {
    return absl::InvalidArgumentError(
        absl::StrCat("bin bits must be in [1, 32], got ", bits));
  }
  return absl::OkStatus();
}

// Inverse-CDF sampling from a fixed discrete distribution.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(absl::Span<const double> weights) {
    double total = 0;
    cdf_.reserve(weights.size());
    for (double w : weights) {
      total += w;
      cdf_.push_back(total);
    }
    for (double& c : cdf_) c /= total;
  }

  size_t Sample(SecureRandom& rng) const {
    double u = rng.Uniform();
    size_t i = std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
    return std::min(i, cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::vector<double> ZipfWeights(size_t n, double exponent) {
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) {
    w[i] = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
  }
  return w;
}

Dataset SingleAttribute(std::vector<std::string> values, std::string source,
                        std::optional<int> bin_bits) {
  Dataset d;
  d.schema = {"value"};
  d.source = std::move(source);
  d.records.reserve(values.size());
  for (std::string& v : values) {
    d.records.push_back(
        {bin_bits ? BinToken(v, *bin_bits) : std::move(v)});
  }
  if (bin_bits) d.domain = BinDomain(*bin_bits);
  return d;
}

// "k=v,k=v" option lists in synthetic dataset specs.
absl::StatusOr<std::map<std::string, std::string>> ParseOptions(
    std::string_view text) {
  std::map<std::string, std::string> out;
  if (text.empty()) return out;
  for (absl::string_view item : absl::StrSplit(ToAbsl(text), ',')) {
    std::vector<std::string> kv = absl::StrSplit(item, absl::MaxSplits('=', 1));
    if (kv.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected key=value, got '", item, "'"));
    }
    out[kv[0]] = kv[1];
  }
  return out;
}

template <typename T>
absl::Status TakeOption(std::map<std::string, std::string>& options,
                        const std::string& key, T& value) {
  auto it = options.find(key);
  if (it == options.end()) return absl::OkStatus();
  bool ok;
  if constexpr (std::is_same_v<T, double>) {
    ok = absl::SimpleAtod(it->second, &value);
  } else {
    ok = absl::SimpleAtoi(it->second, &value);
  }
  if (!ok) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad value for ", key, ": ", it->second));
  }
  options.erase(it);
  return absl::OkStatus();
}

absl::Status NoUnknownOptions(const std::map<std::string, std::string>& rest) {
  if (rest.empty()) return absl::OkStatus();
  return absl::InvalidArgumentError(
      absl::StrCat("unknown option ", rest.begin()->first));
}

absl::StatusOr<std::vector<size_t>> ColumnIndices(
    const std::vector<std::string>& header,
    absl::Span<const std::string> columns) {
  std::vector<size_t> idx;
  for (const std::string& c : columns) {
    auto it = std::find(header.begin(), header.end(), c);
    if (it == header.end()) {
      return absl::InvalidArgumentError(absl::StrCat("missing column ", c));
    }
    idx.push_back(it - header.begin());
  }
  return idx;
}

}  // namespace

std::string NormalizeToken(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (absl::ascii_ispunct(c)) continue;
    out.push_back(absl::ascii_tolower(c));
  }
  return out;
}

std::string BinToken(std::string_view token, int bits) {
  Bytes32 digest = Sha256(token);
  uint64_t low = 0;
  for (int i = 24; i < 32; ++i) low = (low << 8) | digest[i];
  uint64_t mask = bits >= 64 ? ~0ull : ((1ull << bits) - 1);
  return absl::StrCat(low & mask);
}

std::vector<std::string> BinDomain(int bits) {
  std::vector<std::string> out;
  out.reserve(size_t{1} << bits);
  for (uint64_t i = 0; i < (uint64_t{1} << bits); ++i) {
    out.push_back(absl::StrCat(i));
  }
  return out;
}

absl::StatusOr<Dataset> CorpusFromText(std::string_view text,
                                       std::optional<int> bin_bits) {
  if (bin_bits) NEBULA_RETURN_IF_ERROR(CheckBinBits(*bin_bits));
  std::vector<std::string> tokens;
  for (absl::string_view raw :
       absl::StrSplit(ToAbsl(text), absl::ByAnyChar(" \t\n\r\f\v"),
                      absl::SkipEmpty())) {
    std::string t = NormalizeToken(ToStd(raw));
    if (!t.empty()) tokens.push_back(std::move(t));
  }
  return SingleAttribute(std::move(tokens), "corpus", bin_bits);
}

absl::StatusOr<Dataset> LoadCorpus(const std::string& path,
                                   std::optional<int> bin_bits) {
  NEBULA_ASSIGN_OR_RETURN(std::string text, ReadWholeFile(path));
  NEBULA_ASSIGN_OR_RETURN(Dataset d, CorpusFromText(text, bin_bits));
  d.source = path;
  return d;
}

absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) {
          return absl::InvalidArgumentError("quote inside unquoted field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) return absl::InvalidArgumentError("unterminated quote");
  if (field_started || !row.empty()) end_row();
  return rows;
}

absl::StatusOr<Dataset> CsvAttributesFromText(
    std::string_view text, absl::Span<const std::string> columns) {
  if (columns.empty()) return absl::InvalidArgumentError("no columns requested");
  NEBULA_ASSIGN_OR_RETURN(auto rows, ParseCsv(text));
  Dataset d;
  d.schema.assign(columns.begin(), columns.end());
  d.source = "csv";
  if (rows.empty()) return d;
  NEBULA_ASSIGN_OR_RETURN(std::vector<size_t> idx,
                          ColumnIndices(rows[0], columns));
  for (size_t r = 1; r < rows.size(); ++r) {
    std::vector<std::string> record;
    for (size_t i : idx) {
      if (i >= rows[r].size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", r + 1, " has too few fields"));
      }
      record.push_back(rows[r][i]);
    }
    d.records.push_back(std::move(record));
  }
  return d;
}

absl::StatusOr<Dataset> LoadCsvAttributes(
    const std::string& path, absl::Span<const std::string> columns) {
  NEBULA_ASSIGN_OR_RETURN(std::string text, ReadWholeFile(path));
  NEBULA_ASSIGN_OR_RETURN(Dataset d, CsvAttributesFromText(text, columns));
  d.source = path;
  return d;
}

absl::StatusOr<std::vector<std::string>> CoarseGrainLocation(
    std::string_view country, double latitude, double longitude) {
  if (!(latitude >= -90 && latitude <= 90) ||
      !(longitude >= -180 && longitude <= 180)) {
    return absl::InvalidArgumentError("coordinates out of range");
  }
  auto split = [](double v) {
    std::string s = absl::StrFormat("%.6f", v);
    size_t dot = s.find('.');
    return std::make_pair(s.substr(0, dot), s.substr(dot + 1));
  };
  auto [lat_int, lat_frac] = split(latitude);
  auto [lon_int, lon_frac] = split(longitude);
  std::vector<std::string> out;
  out.reserve(kGeoAttributes);
  out.emplace_back(country);
  out.push_back(absl::StrCat(lat_int, ",", lon_int));
  for (int i = 0; i < 6; ++i) {
    out.push_back(absl::StrCat(lat_frac.substr(i, 1), ",",
                               lon_frac.substr(i, 1)));
  }
  return out;
}

absl::StatusOr<Dataset> GeoFromCsvText(std::string_view text,
                                       const std::string& country_column,
                                       const std::string& latitude_column,
                                       const std::string& longitude_column) {
  std::vector<std::string> cols = {country_column, latitude_column,
                                   longitude_column};
  NEBULA_ASSIGN_OR_RETURN(Dataset raw, CsvAttributesFromText(text, cols));
  Dataset d;
  d.schema = {"country", "deg", "d1", "d2", "d3", "d4", "d5", "d6"};
  d.source = "geo";
  for (const auto& r : raw.records) {
    double lat, lon;
    if (!absl::SimpleAtod(r[1], &lat) || !absl::SimpleAtod(r[2], &lon)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad coordinates '", r[1], "', '", r[2], "'"));
    }
    NEBULA_ASSIGN_OR_RETURN(std::vector<std::string> attrs,
                            CoarseGrainLocation(r[0], lat, lon));
    d.records.push_back(std::move(attrs));
  }
  return d;
}

absl::StatusOr<Dataset> LoadGeoCsv(const std::string& path,
                                   const std::string& country_column,
                                   const std::string& latitude_column,
                                   const std::string& longitude_column) {
  NEBULA_ASSIGN_OR_RETURN(std::string text, ReadWholeFile(path));
  NEBULA_ASSIGN_OR_RETURN(
      Dataset d,
      GeoFromCsvText(text, country_column, latitude_column, longitude_column));
  d.source = path;
  return d;
}

Dataset SyntheticZipfCorpus(const ZipfSpec& spec, uint64_t seed,
                            std::optional<int> bin_bits) {
  SecureRandom rng = SecureRandom::ForStream(seed, "synthetic-zipf");
  DiscreteSampler sampler(ZipfWeights(spec.vocabulary, spec.exponent));
  std::vector<std::string> tokens;
  tokens.reserve(spec.tokens);
  for (size_t i = 0; i < spec.tokens; ++i) {
    tokens.push_back(absl::StrCat("w", sampler.Sample(rng)));
  }
  return SingleAttribute(
      std::move(tokens),
      absl::StrCat("synthetic:zipf:tokens=", spec.tokens,
                   ",vocab=", spec.vocabulary, ",s=", spec.exponent),
      bin_bits);
}

Dataset SyntheticCensus(size_t persons, uint64_t seed) {
  SecureRandom rng = SecureRandom::ForStream(seed, "synthetic-census");
  // Age pyramid: flat to 60, then tapering to 90.
  std::vector<double> age_w(91);
  for (int a = 0; a <= 90; ++a) age_w[a] = a < 60 ? 1.0 : std::exp(-(a - 60) / 12.0);
  DiscreteSampler age(age_w);
  DiscreteSampler race(std::vector<double>{0.72, 0.12, 0.01, 0.005, 0.06,
                                           0.01, 0.05, 0.02, 0.005});
  // MARST 1..6 by age band: married, spouse absent, separated, divorced,
  // widowed, never married.
  DiscreteSampler marst_young(std::vector<double>{0.01, 0, 0, 0, 0, 0.99});
  DiscreteSampler marst_adult(
      std::vector<double>{0.45, 0.02, 0.02, 0.10, 0.01, 0.40});
  DiscreteSampler marst_old(
      std::vector<double>{0.55, 0.02, 0.02, 0.13, 0.20, 0.08});

  Dataset d;
  d.schema = {"SEX", "MARST", "RACE", "EDUC", "AGE"};
  d.source = absl::StrCat("synthetic:census:n=", persons);
  d.records.reserve(persons);
  for (size_t i = 0; i < persons; ++i) {
    int a = static_cast<int>(age.Sample(rng));
    int sex = rng.Uniform() < 0.49 ? 1 : 2;
    const DiscreteSampler& m =
        a < 18 ? marst_young : (a < 60 ? marst_adult : marst_old);
    int marst = static_cast<int>(m.Sample(rng)) + 1;
    int r = static_cast<int>(race.Sample(rng)) + 1;
    int educ;
    if (a < 18) {
      educ = std::min(a / 2, 6);
    } else {
      // Centered on completed high school (6) with a long upper tail.
      double e = 6 + 2.0 * (rng.Uniform() + rng.Uniform() - 1.0) +
                 (rng.Uniform() < 0.3 ? 3 : 0);
      educ = std::clamp(static_cast<int>(std::lround(e)), 0, 11);
    }
    d.records.push_back({absl::StrCat(sex), absl::StrCat(marst),
                         absl::StrCat(r), absl::StrCat(educ),
                         absl::StrCat(a)});
  }
  return d;
}

Dataset SyntheticGeo(size_t checkins, uint64_t seed) {
  SecureRandom rng = SecureRandom::ForStream(seed, "synthetic-geo");
  constexpr int kCountries = 77;
  constexpr int kCitiesPerCountry = 6;
  constexpr int kVenuesPerCity = 400;
  std::normal_distribution<double> jitter(0.0, 0.03);

  struct City {
    std::vector<std::pair<double, double>> venues;
  };
  std::vector<std::vector<City>> world(kCountries);
  for (auto& country : world) {
    double clat = -60 + 130 * rng.Uniform();
    double clon = -170 + 340 * rng.Uniform();
    for (int c = 0; c < kCitiesPerCountry; ++c) {
      double lat = std::clamp(clat + 4 * (rng.Uniform() - 0.5), -89.0, 89.0);
      double lon = std::clamp(clon + 4 * (rng.Uniform() - 0.5), -179.0, 179.0);
      City city;
      for (int v = 0; v < kVenuesPerCity; ++v) {
        city.venues.emplace_back(lat + jitter(rng), lon + jitter(rng));
      }
      country.push_back(std::move(city));
    }
  }
  DiscreteSampler country_s(ZipfWeights(kCountries, 1.2));
  DiscreteSampler city_s(ZipfWeights(kCitiesPerCountry, 1.0));
  DiscreteSampler venue_s(ZipfWeights(kVenuesPerCity, 0.8));

  Dataset d;
  d.schema = {"country", "deg", "d1", "d2", "d3", "d4", "d5", "d6"};
  d.source = absl::StrCat("synthetic:geo:n=", checkins);
  d.records.reserve(checkins);
  for (size_t i = 0; i < checkins; ++i) {
    size_t k = country_s.Sample(rng);
    const City& city = world[k][city_s.Sample(rng)];
    auto [lat, lon] = city.venues[venue_s.Sample(rng)];
    d.records.push_back(*CoarseGrainLocation(absl::StrFormat("C%02d", k),
                                             lat, lon));
  }
  return d;
}

absl::StatusOr<Dataset> LoadDataset(std::string_view spec,
                                    std::optional<int> bin_bits,
                                    uint64_t seed) {
  if (bin_bits) NEBULA_RETURN_IF_ERROR(CheckBinBits(*bin_bits));
  auto strip = [&](std::string_view prefix) {
    return spec.substr(0, prefix.size()) == prefix
               ? std::optional(spec.substr(prefix.size()))
               : std::nullopt;
  };
  std::optional<std::string_view> rest;
  if ((rest = strip("synthetic:"))) {
    std::string_view kind = rest->substr(0, rest->find(':'));
    std::string_view opts = kind.size() < rest->size()
                                ? rest->substr(kind.size() + 1)
                                : std::string_view();
    NEBULA_ASSIGN_OR_RETURN(auto options, ParseOptions(opts));
    if (kind == "zipf") {
      ZipfSpec z;
      NEBULA_RETURN_IF_ERROR(TakeOption(options, "tokens", z.tokens));
      NEBULA_RETURN_IF_ERROR(TakeOption(options, "vocab", z.vocabulary));
      NEBULA_RETURN_IF_ERROR(TakeOption(options, "s", z.exponent));
      NEBULA_RETURN_IF_ERROR(NoUnknownOptions(options));
      if (z.vocabulary == 0) return absl::InvalidArgumentError("empty vocabulary");
      return SyntheticZipfCorpus(z, seed, bin_bits);
    }
    size_t n = 200000;
    NEBULA_RETURN_IF_ERROR(TakeOption(options, "n", n));
    NEBULA_RETURN_IF_ERROR(NoUnknownOptions(options));
    if (bin_bits) {
      return absl::InvalidArgumentError("bin bits need a single-attribute dataset");
    }
    if (kind == "census") return SyntheticCensus(n, seed);
    if (kind == "geo") return SyntheticGeo(n, seed);
    return absl::InvalidArgumentError(
        absl::StrCat("unknown synthetic dataset ", ToAbsl(kind)));
  }
  bool geo = false;
  if ((rest = strip("csv:")) || (geo = (rest = strip("geo:")).has_value())) {
    size_t colon = rest->rfind(':');
    if (colon == std::string_view::npos) {
      return absl::InvalidArgumentError("expected <path>:<columns>");
    }
    std::string path(rest->substr(0, colon));
    std::vector<std::string> cols =
        absl::StrSplit(ToAbsl(rest->substr(colon + 1)), ',');
    if (bin_bits) {
      return absl::InvalidArgumentError("bin bits need a single-attribute dataset");
    }
    if (geo) {
      if (cols.size() != 3) {
        return absl::InvalidArgumentError("geo needs <country>,<lat>,<lon>");
      }
      return LoadGeoCsv(path, cols[0], cols[1], cols[2]);
    }
    return LoadCsvAttributes(path, cols);
  }
  return LoadCorpus(std::string(spec), bin_bits);
}

absl::StatusOr<std::map<std::string, uint64_t>> PrefixHistogram(
    const Dataset& dataset, int prefix_length) {
  std::map<std::string, uint64_t> out;
  for (const auto& record : dataset.records) {
    if (prefix_length < 1 ||
        prefix_length > static_cast<int>(record.size())) {
      return absl::InvalidArgumentError("prefix length out of range");
    }
    NEBULA_ASSIGN_OR_RETURN(
        std::string key,
        EncodePrefix(absl::MakeConstSpan(record.data(), prefix_length)));
    ++out[key];
  }
  return out;
}

}  // namespace nebula
