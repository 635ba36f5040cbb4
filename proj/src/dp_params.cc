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

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <map>
#include <string>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"
#include "nebula/status_macros.h"
#include "nebula/strings.h"

namespace nebula {

namespace {

bool IsProbability(double d) { return std::isfinite(d) && d > 0 && d < 1; }

absl::Status DomainError(std::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("parameter domain: ", ToAbsl(what)));
}

std::string FormatDouble(double d) { return absl::StrFormat("%.17g", d); }

}  // namespace

absl::Status ValidateBudget(const DpBudget& b) {
  if (!(std::isfinite(b.eps_re) && b.eps_re > 0)) {
    return DomainError("eps_re must be positive and finite");
  }
  if (!(std::isfinite(b.eps_unre) && b.eps_unre > 0)) {
    return DomainError("eps_unre must be positive and finite");
  }
  if (!IsProbability(b.delta_re)) return DomainError("delta_re must be in (0,1)");
  if (!IsProbability(b.delta_unre)) {
    return DomainError("delta_unre must be in (0,1)");
  }
  if (!(b.alpha > 0 && b.alpha <= 1)) return DomainError("alpha must be in (0,1]");
  if (b.eps_unre > b.eps_re) return DomainError("eps_unre must not exceed eps_re");
  if (b.delta_unre > b.delta_re) {
    return DomainError("delta_unre must not exceed delta_re");
  }
  return absl::OkStatus();
}

double ThresholdConstant(double alpha) {
  return std::log(1.0 / alpha) - 1.0 / (1.0 + alpha);
}

double DerivedSamplingRate(const DpBudget& b) {
  return b.alpha * -std::expm1(-b.eps_re);
}

double DerivedThresholdReal(const DpBudget& b) {
  return std::log(1.0 / b.delta_re) / ThresholdConstant(b.alpha);
}

double DerivedShiftReal(const DpBudget& b) {
  return kMultiplicitySensitivity +
         (kMultiplicitySensitivity / b.eps_unre) * std::log(2.0 / b.delta_unre);
}

double DpParams::epsilon() const {
  return std::max(budget.eps_re, budget.eps_unre);
}

double DpParams::delta() const {
  return std::max(budget.delta_re, budget.delta_unre);
}

absl::StatusOr<DpParams> DeriveParams(const DpBudget& budget,
                                      const ParamOverrides& overrides) {
  NEBULA_RETURN_IF_ERROR(ValidateBudget(budget));
  DpParams p;
  p.budget = budget;

  if (overrides.sampling_rate.has_value()) {
    double v = *overrides.sampling_rate;
    if (!(v > 0 && v <= 1)) return DomainError("sampling_rate override must be in (0,1]");
    p.sampling_rate = v;
    p.sampling_rate_overridden = true;
  } else {
    p.sampling_rate = DerivedSamplingRate(budget);
  }

  if (overrides.threshold.has_value()) {
    if (*overrides.threshold < 1) return DomainError("threshold override must be >= 1");
    p.threshold = *overrides.threshold;
    p.threshold_overridden = true;
  } else {
    if (ThresholdConstant(budget.alpha) <= 0) {
      return DomainError(
          "C_alpha = ln(1/alpha) - 1/(1+alpha) is not positive; choose a "
          "smaller alpha or override the threshold");
    }
    double tau = std::ceil(DerivedThresholdReal(budget));
    if (!(tau >= 1 && tau < 1e9)) return DomainError("derived threshold out of range");
    p.threshold = static_cast<int>(tau);
  }

  if (overrides.tsdlap_scale.has_value()) {
    double v = *overrides.tsdlap_scale;
    if (!(std::isfinite(v) && v > 0)) return DomainError("tsdlap_scale override must be positive");
    p.tsdlap_scale = v;
    p.tsdlap_scale_overridden = true;
  } else {
    p.tsdlap_scale = kMultiplicitySensitivity / budget.eps_unre;
  }

  if (overrides.tsdlap_shift.has_value()) {
    if (*overrides.tsdlap_shift < 0) return DomainError("tsdlap_shift override must be >= 0");
    p.tsdlap_shift = *overrides.tsdlap_shift;
    p.tsdlap_shift_overridden = true;
  } else {
    double t = std::ceil(DerivedShiftReal(budget));
    if (!(t >= 0 && t < 1e7)) return DomainError("derived shift out of range");
    p.tsdlap_shift = static_cast<int>(t);
  }
  return p;
}

std::string DpParams::ToConfig() const {
  std::string out;
  absl::StrAppend(&out, "eps_re=", FormatDouble(budget.eps_re), "\n");
  absl::StrAppend(&out, "delta_re=", FormatDouble(budget.delta_re), "\n");
  absl::StrAppend(&out, "eps_unre=", FormatDouble(budget.eps_unre), "\n");
  absl::StrAppend(&out, "delta_unre=", FormatDouble(budget.delta_unre), "\n");
  absl::StrAppend(&out, "alpha=", FormatDouble(budget.alpha), "\n");
  absl::StrAppend(&out, "sampling_rate=", FormatDouble(sampling_rate), "\n");
  absl::StrAppend(&out, "sampling_rate_overridden=", sampling_rate_overridden ? 1 : 0, "\n");
  absl::StrAppend(&out, "threshold=", threshold, "\n");
  absl::StrAppend(&out, "threshold_overridden=", threshold_overridden ? 1 : 0, "\n");
  absl::StrAppend(&out, "tsdlap_scale=", FormatDouble(tsdlap_scale), "\n");
  absl::StrAppend(&out, "tsdlap_scale_overridden=", tsdlap_scale_overridden ? 1 : 0, "\n");
  absl::StrAppend(&out, "tsdlap_shift=", tsdlap_shift, "\n");
  absl::StrAppend(&out, "tsdlap_shift_overridden=", tsdlap_shift_overridden ? 1 : 0, "\n");
  return out;
}

absl::StatusOr<DpParams> DpParams::FromConfig(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  for (absl::string_view line : absl::StrSplit(ToAbsl(text), '\n')) {
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line[0] == '#') continue;
    std::pair<absl::string_view, absl::string_view> parts =
        absl::StrSplit(line, absl::MaxSplits('=', 1));
    kv[std::string(absl::StripAsciiWhitespace(parts.first))] =
        std::string(absl::StripAsciiWhitespace(parts.second));
  }
  auto get_double = [&](std::string_view key, double* out) -> absl::Status {
    auto it = kv.find(key);
    if (it == kv.end()) return absl::OkStatus();
    if (!absl::SimpleAtod(it->second, out)) {
      return absl::InvalidArgumentError(absl::StrCat("bad number for ", ToAbsl(key)));
    }
    return absl::OkStatus();
  };
  auto get_flag = [&](std::string_view key) {
    auto it = kv.find(key);
    return it != kv.end() && it->second == "1";
  };
  auto get_int = [&](std::string_view key) -> absl::StatusOr<std::optional<int>> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::optional<int>();
    int v;
    if (!absl::SimpleAtoi(it->second, &v)) {
      return absl::InvalidArgumentError(absl::StrCat("bad integer for ", ToAbsl(key)));
    }
    return std::optional<int>(v);
  };

  DpBudget budget;
  NEBULA_RETURN_IF_ERROR(get_double("eps_re", &budget.eps_re));
  NEBULA_RETURN_IF_ERROR(get_double("delta_re", &budget.delta_re));
  NEBULA_RETURN_IF_ERROR(get_double("eps_unre", &budget.eps_unre));
  NEBULA_RETURN_IF_ERROR(get_double("delta_unre", &budget.delta_unre));
  NEBULA_RETURN_IF_ERROR(get_double("alpha", &budget.alpha));

  ParamOverrides overrides;
  double sampling_rate = -1, scale = -1;
  NEBULA_RETURN_IF_ERROR(get_double("sampling_rate", &sampling_rate));
  NEBULA_RETURN_IF_ERROR(get_double("tsdlap_scale", &scale));
  NEBULA_ASSIGN_OR_RETURN(std::optional<int> threshold, get_int("threshold"));
  NEBULA_ASSIGN_OR_RETURN(std::optional<int> shift, get_int("tsdlap_shift"));
  if (get_flag("sampling_rate_overridden")) overrides.sampling_rate = sampling_rate;
  if (get_flag("threshold_overridden")) overrides.threshold = threshold.value_or(-1);
  if (get_flag("tsdlap_scale_overridden")) overrides.tsdlap_scale = scale;
  if (get_flag("tsdlap_shift_overridden")) overrides.tsdlap_shift = shift.value_or(-1);

  NEBULA_ASSIGN_OR_RETURN(DpParams p, DeriveParams(budget, overrides));
  // Derived values written in the file must agree with the derivation.
  auto mismatch = [](std::string_view key) {
    return absl::InvalidArgumentError(absl::StrCat(
        "config value for ", ToAbsl(key),
        " disagrees with the derived value; set ", ToAbsl(key),
        "_overridden=1 to override it"));
  };
  if (!p.sampling_rate_overridden && kv.contains("sampling_rate") &&
      sampling_rate != p.sampling_rate) {
    return mismatch("sampling_rate");
  }
  if (!p.threshold_overridden && threshold.has_value() &&
      *threshold != p.threshold) {
    return mismatch("threshold");
  }
  if (!p.tsdlap_scale_overridden && kv.contains("tsdlap_scale") &&
      scale != p.tsdlap_scale) {
    return mismatch("tsdlap_scale");
  }
  if (!p.tsdlap_shift_overridden && shift.has_value() &&
      *shift != p.tsdlap_shift) {
    return mismatch("tsdlap_shift");
  }
  return p;
}

TsdlapDistribution::TsdlapDistribution(double scale, int shift)
    : scale_(scale), shift_(shift) {
  double a = 1.0;
  for (int c = 1; c <= shift; ++c) a += 2.0 * std::exp(-c / scale);
  normalizer_ = a;
  cdf_.resize(2 * static_cast<size_t>(shift) + 1);
  double acc = 0;
  for (int c = 0; c <= 2 * shift; ++c) {
    acc += Pmf(c);
    cdf_[c] = acc;
  }
  cdf_.back() = 1.0;
}

absl::StatusOr<TsdlapDistribution> TsdlapDistribution::Create(double scale,
                                                              int shift) {
  if (!(std::isfinite(scale) && scale > 0)) {
    return DomainError("TSDLap scale must be positive");
  }
  if (shift < 0) return DomainError("TSDLap shift must be non-negative");
  return TsdlapDistribution(scale, shift);
}

double TsdlapDistribution::Pmf(long long c) const {
  if (c < 0 || c > 2LL * shift_) return 0.0;
  return std::exp(-std::llabs(c - shift_) / scale_) / normalizer_;
}

int TsdlapDistribution::Sample(SecureRandom& rng) const {
  double u = rng.Uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<ptrdiff_t>(it - cdf_.begin(),
                                              cdf_.size() - 1));
}

absl::StatusOr<double> TsdlapPmf(long long c, double scale, int shift) {
  NEBULA_ASSIGN_OR_RETURN(TsdlapDistribution d,
                          TsdlapDistribution::Create(scale, shift));
  return d.Pmf(c);
}

}  // namespace nebula
