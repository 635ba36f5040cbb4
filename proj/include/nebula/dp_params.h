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

// Privacy parameters of the sample-and-threshold mechanism and the
// truncated shifted discrete Laplace (TSDLap) distribution used to size
// dummy groups.
//
// The revealed path gets (eps_re, delta_re): clients participate with
// probability
//   p_s = alpha * (1 - exp(-eps_re))
// and the server learns only values with at least
//   tau = ceil(ln(1 / delta_re) / C_alpha),  C_alpha = ln(1/alpha) - 1/(1+alpha)
// sampled copies. The unrevealed path gets (eps_unre, delta_unre): dummy
// group counts are TSDLap(lambda, t) with sensitivity 2,
//   lambda = 2 / eps_unre,  t = ceil(2 + (2 / eps_unre) ln(2 / delta_unre)).
// The overall guarantee is (max eps, max delta).

#ifndef NEBULA_DP_PARAMS_H_
#define NEBULA_DP_PARAMS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nebula/random.h"

namespace nebula {

// Sensitivity of the unrevealed-multiplicity histogram.
inline constexpr double kMultiplicitySensitivity = 2.0;

struct DpBudget {
  double eps_re = 1.0;
  double delta_re = 1e-8;
  double eps_unre = 1.0;
  double delta_unre = 1e-8;
  double alpha = 1.0 / 6.0;

  friend bool operator==(const DpBudget&, const DpBudget&) = default;
};

absl::Status ValidateBudget(const DpBudget& budget);

// Values that replace the derived ones. Used to pin reference
// instantiations (e.g. shift 15) and to run controlled experiments.
struct ParamOverrides {
  std::optional<double> sampling_rate;
  std::optional<int> threshold;
  std::optional<double> tsdlap_scale;
  std::optional<int> tsdlap_shift;
};

struct DpParams {
  DpBudget budget;
  double sampling_rate = 0;
  int threshold = 0;
  double tsdlap_scale = 0;
  int tsdlap_shift = 0;

  bool sampling_rate_overridden = false;
  bool threshold_overridden = false;
  bool tsdlap_scale_overridden = false;
  bool tsdlap_shift_overridden = false;

  double epsilon() const;
  double delta() const;

  // Flat "key=value" lines, one per field, including override flags.
  // Doubles are written with 17 significant digits so parsing round-trips.
  std::string ToConfig() const;
  static absl::StatusOr<DpParams> FromConfig(std::string_view text);

  friend bool operator==(const DpParams&, const DpParams&) = default;
};

// C_alpha = ln(1/alpha) - 1/(1+alpha). Positive only for alpha below ~0.43.
double ThresholdConstant(double alpha);
double DerivedSamplingRate(const DpBudget& budget);
// Real-valued threshold before rounding up.
double DerivedThresholdReal(const DpBudget& budget);
double DerivedShiftReal(const DpBudget& budget);

// Errors: invalid budget, or C_alpha <= 0 without a threshold override.
absl::StatusOr<DpParams> DeriveParams(const DpBudget& budget,
                                      const ParamOverrides& overrides = {});

// TSDLap(scale, shift) on {0, ..., 2 * shift}.
class TsdlapDistribution {
 public:
  // scale > 0, shift >= 0.
  static absl::StatusOr<TsdlapDistribution> Create(double scale, int shift);

  double Pmf(long long c) const;
  // Normalization constant A = 1 + 2 * sum_{c=1..t} exp(-c / scale).
  double normalizer() const { return normalizer_; }
  int shift() const { return shift_; }
  double scale() const { return scale_; }
  int max_value() const { return 2 * shift_; }

  // Exact inverse-CDF sampling over the finite support.
  int Sample(SecureRandom& rng) const;

 private:
  TsdlapDistribution(double scale, int shift);

  double scale_;
  int shift_;
  double normalizer_;
  std::vector<double> cdf_;
};

// Convenience for the one-off evaluation used in tests and docs.
absl::StatusOr<double> TsdlapPmf(long long c, double scale, int shift);

}  // namespace nebula

#endif  // NEBULA_DP_PARAMS_H_
