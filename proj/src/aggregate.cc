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
#include <cstring>
#include <numeric>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "nebula/prefix.h"
#include "nebula/shamir.h"
#include "nebula/status_macros.h"
#include "nebula/strings.h"

namespace nebula {

namespace {

constexpr std::string_view kCsvMagic = "nebula-report,1";

bool NeedsEscape(unsigned char c) {
  if (c < 0x21 || c > 0x7e) return true;
  return c == ',' || c == '"' || c == '%' || c == '|' || c == '!';
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

// Layer >= 2 values that do not parse as a prefix are written raw behind a
// '!' marker; '!' is always escaped inside regular values.
std::string RenderValue(const std::string& value, int layer) {
  if (layer >= 2) {
    auto attrs = DecodePrefix(value, layer);
    if (attrs.ok()) {
      std::vector<std::string> parts;
      for (const std::string& a : *attrs) parts.push_back(PercentEncode(a));
      return absl::StrJoin(parts, "|");
    }
    return absl::StrCat("!", PercentEncode(value));
  }
  return PercentEncode(value);
}

absl::StatusOr<std::string> ParseValue(std::string_view text, int layer) {
  if (!text.empty() && text[0] == '!') return PercentDecode(text.substr(1));
  if (layer < 2) return PercentDecode(text);
  std::vector<std::string> attrs;
  for (absl::string_view part : absl::StrSplit(ToAbsl(text), '|')) {
    NEBULA_ASSIGN_OR_RETURN(std::string a, PercentDecode(ToStd(part)));
    attrs.push_back(std::move(a));
  }
  if (static_cast<int>(attrs.size()) != layer) {
    return absl::InvalidArgumentError("prefix arity does not match the layer");
  }
  return EncodePrefix(attrs);
}

}  // namespace

std::vector<TagGroup> GroupByTag(std::vector<Submission> submissions) {
  std::unordered_map<Bytes32, size_t, Bytes32Hash> index;
  std::vector<TagGroup> groups;
  for (Submission& s : submissions) {
    auto [it, inserted] = index.try_emplace(s.tag, groups.size());
    if (inserted) groups.push_back(TagGroup{s.tag, {}});
    groups[it->second].submissions.push_back(std::move(s));
  }
  std::sort(groups.begin(), groups.end(),
            [](const TagGroup& a, const TagGroup& b) { return a.tag < b.tag; });
  return groups;
}

RecoveryResult RecoverGroup(const TagGroup& group, int threshold) {
  const size_t n = group.submissions.size();
  if (threshold < 1) return Malformed{n, "threshold must be >= 1"};
  if (n < static_cast<size_t>(threshold)) return Unrevealed{n};

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return group.submissions[a].share.x.bytes() <
           group.submissions[b].share.x.bytes();
  });
  std::vector<KeyShare> shares;
  shares.reserve(threshold);
  for (size_t k = 0; k < n && shares.size() < static_cast<size_t>(threshold);
       ++k) {
    const KeyShare& share = group.submissions[order[k]].share;
    if (!shares.empty() && shares.back().x == share.x) continue;
    shares.push_back(share);
  }
  if (shares.size() < static_cast<size_t>(threshold)) {
    return Malformed{n, "too few distinct share points"};
  }
  absl::StatusOr<FieldElement> secret = InterpolateAtZero(shares);
  if (!secret.ok()) return Malformed{n, std::string(secret.status().message())};

  const std::string& ciphertext = group.submissions[order[0]].ciphertext;
  for (const Submission& s : group.submissions) {
    if (s.ciphertext != ciphertext) {
      return Malformed{n, "ciphertexts differ within the group"};
    }
  }
  absl::StatusOr<std::string> value = DecryptValue(*secret, ciphertext);
  if (!value.ok()) return Malformed{n, std::string(value.status().message())};
  return Recovered{*std::move(value), n, *secret};
}

uint64_t HistogramReport::revealed_mass() const {
  uint64_t total = 0;
  for (const auto& [value, count] : revealed) total += count;
  return total;
}

void AddToReport(const RecoveryResult& result, HistogramReport& report) {
  if (const auto* r = std::get_if<Recovered>(&result)) {
    report.revealed[r->value] += r->count;
  } else if (const auto* u = std::get_if<Unrevealed>(&result)) {
    if (u->count > 0) ++report.unrevealed_multiplicities[u->count];
  } else {
    const auto& m = std::get<Malformed>(result);
    ++report.malformed_groups;
    report.malformed_members += m.count;
  }
}

HistogramReport BuildReport(absl::Span<const TagGroup> groups,
                            const DpParams& params) {
  HistogramReport report;
  report.params = params;
  for (const TagGroup& g : groups) {
    AddToReport(RecoverGroup(g, params.threshold), report);
  }
  return report;
}

std::string PercentEncode(std::string_view bytes) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(bytes.size());
  for (char ch : bytes) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (NeedsEscape(c)) {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

absl::StatusOr<std::string> PercentDecode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out.push_back(text[i]);
      continue;
    }
    if (i + 2 >= text.size()) {
      return absl::InvalidArgumentError("truncated percent escape");
    }
    int hi = HexValue(text[i + 1]);
    int lo = HexValue(text[i + 2]);
    if (hi < 0 || lo < 0) return absl::InvalidArgumentError("bad percent escape");
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

std::string ReportToCsv(const HistogramReport& report) {
  std::string out;
  absl::StrAppend(&out, ToAbsl(kCsvMagic), "\n");
  absl::StrAppend(&out, "layer,", report.layer, "\n");
  absl::StrAppend(&out, "dummy_noise,", report.dummy_noise ? 1 : 0, "\n");
  for (absl::string_view line :
       absl::StrSplit(report.params.ToConfig(), '\n', absl::SkipEmpty())) {
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(line, absl::MaxSplits('=', 1));
    absl::StrAppend(&out, "param,", kv.first, ",", kv.second, "\n");
  }
  absl::StrAppend(&out, "malformed_groups,", report.malformed_groups, "\n");
  absl::StrAppend(&out, "malformed_members,", report.malformed_members, "\n");
  absl::StrAppend(&out, "revealed,", report.revealed.size(), "\n");
  absl::StrAppend(&out, "value,count\n");
  for (const auto& [value, count] : report.revealed) {
    absl::StrAppend(&out, RenderValue(value, report.layer), ",", count, "\n");
  }
  absl::StrAppend(&out, "unrevealed,", report.unrevealed_multiplicities.size(),
                  "\n");
  absl::StrAppend(&out, "multiplicity,num_tags\n");
  for (const auto& [i, tags] : report.unrevealed_multiplicities) {
    absl::StrAppend(&out, i, ",", tags, "\n");
  }
  absl::StrAppend(&out, "end\n");
  return out;
}

std::string ReportsToCsv(absl::Span<const HistogramReport> reports) {
  std::string out;
  for (const HistogramReport& r : reports) out += ReportToCsv(r);
  return out;
}

namespace {

class CsvLines {
 public:
  explicit CsvLines(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }

  absl::StatusOr<std::vector<std::string_view>> Next() {
    if (done()) return absl::InvalidArgumentError("unexpected end of report");
    size_t nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) nl = text_.size();
    std::string_view line = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    std::vector<std::string_view> fields;
    for (absl::string_view f : absl::StrSplit(ToAbsl(line), ',')) {
      fields.push_back(ToStd(f));
    }
    return fields;
  }

  // Reads "<key>,<value>" and returns the value.
  absl::StatusOr<std::string_view> Expect(std::string_view key) {
    NEBULA_ASSIGN_OR_RETURN(std::vector<std::string_view> f, Next());
    if (f.size() != 2 || f[0] != key) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected report row '", ToAbsl(key), "'"));
    }
    return f[1];
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

template <typename T>
absl::StatusOr<T> ParseNumber(std::string_view text) {
  T v;
  if (!absl::SimpleAtoi(ToAbsl(text), &v)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad integer '", ToAbsl(text), "' in report"));
  }
  return v;
}

absl::StatusOr<HistogramReport> ParseOne(CsvLines& lines) {
  HistogramReport r;
  NEBULA_ASSIGN_OR_RETURN(std::vector<std::string_view> magic, lines.Next());
  if (magic.size() != 2 || absl::StrCat(ToAbsl(magic[0]), ",",
                                        ToAbsl(magic[1])) != kCsvMagic) {
    return absl::InvalidArgumentError("not a report");
  }
  NEBULA_ASSIGN_OR_RETURN(std::string_view layer, lines.Expect("layer"));
  NEBULA_ASSIGN_OR_RETURN(r.layer, ParseNumber<int>(layer));
  NEBULA_ASSIGN_OR_RETURN(std::string_view noise, lines.Expect("dummy_noise"));
  r.dummy_noise = noise == "1";

  std::string config;
  std::vector<std::string_view> row;
  while (true) {
    NEBULA_ASSIGN_OR_RETURN(row, lines.Next());
    if (row.empty() || row[0] != "param") break;
    if (row.size() != 3) return absl::InvalidArgumentError("bad param row");
    absl::StrAppend(&config, ToAbsl(row[1]), "=", ToAbsl(row[2]), "\n");
  }
  NEBULA_ASSIGN_OR_RETURN(r.params, DpParams::FromConfig(config));

  if (row.size() != 2 || row[0] != "malformed_groups") {
    return absl::InvalidArgumentError("expected malformed_groups row");
  }
  NEBULA_ASSIGN_OR_RETURN(r.malformed_groups, ParseNumber<uint64_t>(row[1]));
  NEBULA_ASSIGN_OR_RETURN(std::string_view members,
                          lines.Expect("malformed_members"));
  NEBULA_ASSIGN_OR_RETURN(r.malformed_members, ParseNumber<uint64_t>(members));

  NEBULA_ASSIGN_OR_RETURN(std::string_view nrev, lines.Expect("revealed"));
  NEBULA_ASSIGN_OR_RETURN(size_t revealed_rows, ParseNumber<size_t>(nrev));
  NEBULA_ASSIGN_OR_RETURN(std::string_view header, lines.Expect("value"));
  if (header != "count") return absl::InvalidArgumentError("bad revealed header");
  for (size_t i = 0; i < revealed_rows; ++i) {
    NEBULA_ASSIGN_OR_RETURN(row, lines.Next());
    if (row.size() != 2) return absl::InvalidArgumentError("bad revealed row");
    NEBULA_ASSIGN_OR_RETURN(std::string value, ParseValue(row[0], r.layer));
    NEBULA_ASSIGN_OR_RETURN(uint64_t count, ParseNumber<uint64_t>(row[1]));
    r.revealed[std::move(value)] = count;
  }

  NEBULA_ASSIGN_OR_RETURN(std::string_view nunr, lines.Expect("unrevealed"));
  NEBULA_ASSIGN_OR_RETURN(size_t unrevealed_rows, ParseNumber<size_t>(nunr));
  NEBULA_ASSIGN_OR_RETURN(header, lines.Expect("multiplicity"));
  if (header != "num_tags") {
    return absl::InvalidArgumentError("bad unrevealed header");
  }
  for (size_t i = 0; i < unrevealed_rows; ++i) {
    NEBULA_ASSIGN_OR_RETURN(row, lines.Next());
    if (row.size() != 2) return absl::InvalidArgumentError("bad unrevealed row");
    NEBULA_ASSIGN_OR_RETURN(int m, ParseNumber<int>(row[0]));
    NEBULA_ASSIGN_OR_RETURN(uint64_t tags, ParseNumber<uint64_t>(row[1]));
    r.unrevealed_multiplicities[m] = tags;
  }
  NEBULA_ASSIGN_OR_RETURN(row, lines.Next());
  if (row.size() != 1 || row[0] != "end") {
    return absl::InvalidArgumentError("expected end row");
  }
  return r;
}

}  // namespace

absl::StatusOr<std::vector<HistogramReport>> ParseReportsCsv(
    std::string_view csv) {
  CsvLines lines(csv);
  std::vector<HistogramReport> out;
  while (!lines.done()) {
    NEBULA_ASSIGN_OR_RETURN(HistogramReport r, ParseOne(lines));
    out.push_back(std::move(r));
  }
  return out;
}

absl::StatusOr<HistogramReport> ParseReportCsv(std::string_view csv) {
  NEBULA_ASSIGN_OR_RETURN(std::vector<HistogramReport> reports,
                          ParseReportsCsv(csv));
  if (reports.size() != 1) {
    return absl::InvalidArgumentError("expected exactly one report");
  }
  return std::move(reports[0]);
}

absl::Status Aggregator::Add(Submission submission) {
  {
    std::lock_guard<std::mutex> lock(state_mu_);
    if (sealed_) return absl::FailedPreconditionError("ingestion is sealed");
  }
  Shard& shard = shards_[submission.tag[0] % kShards];
  std::lock_guard<std::mutex> lock(shard.mu);
  shard.groups[submission.tag].push_back(std::move(submission));
  ++shard.size;
  return absl::OkStatus();
}

void Aggregator::Seal() {
  std::lock_guard<std::mutex> lock(state_mu_);
  sealed_ = true;
}

bool Aggregator::sealed() const {
  std::lock_guard<std::mutex> lock(state_mu_);
  return sealed_;
}

size_t Aggregator::size() const {
  size_t total = 0;
  for (const Shard& s : shards_) {
    std::lock_guard<std::mutex> lock(s.mu);
    total += s.size;
  }
  return total;
}

absl::StatusOr<HistogramReport> Aggregator::Decode() {
  if (!sealed()) return absl::FailedPreconditionError("seal before decoding");
  std::vector<TagGroup> groups;
  for (Shard& s : shards_) {
    std::lock_guard<std::mutex> lock(s.mu);
    for (auto& [tag, members] : s.groups) {
      groups.push_back(TagGroup{tag, std::move(members)});
    }
    s.groups.clear();
    s.size = 0;
  }
  std::sort(groups.begin(), groups.end(),
            [](const TagGroup& a, const TagGroup& b) { return a.tag < b.tag; });
  return BuildReport(groups, params_);
}

}  // namespace nebula
