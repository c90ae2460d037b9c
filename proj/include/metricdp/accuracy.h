//
// Copyright 2026 The metricdp Authors
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
//

#ifndef METRICDP_ACCURACY_H_
#define METRICDP_ACCURACY_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "metricdp/mechanism.h"
#include "metricdp/metric_space.h"

namespace metricdp {

// Tolerance used for the tightness flag, relative to max(1, bound).
inline constexpr double kTightnessTolerance = 1e-12;

// A lower bound on the maximal expected error. At delta = 1 every mechanism
// is private, the bound degenerates to 0 and `vacuous` is set.
struct LowerBound {
  double value = 0.0;
  bool vacuous = false;

  bool operator==(const LowerBound&) const = default;
};

// (1 - delta) * diam / (2 (1 + e^epsilon)).
absl::StatusOr<LowerBound> LowerBoundGeneral(double diam,
                                             const PrivacyParams& params);

// (1 - delta) * kappa * m / (m + e^epsilon) for |D| = m + 1 points.
absl::StatusOr<LowerBound> LowerBoundFinite(double kappa, std::size_t m,
                                            const PrivacyParams& params);

struct PointError {
  std::string point;
  double expected_error = 0.0;

  bool operator==(const PointError&) const = default;
};

// Expected error E[rho(X_d, d)] for every input point d, its maximum, and the
// two lower bounds evaluated on the input points' diameter and separation.
struct ErrorReport {
  std::vector<PointError> per_point;
  double max_error = 0.0;
  double bound_general = 0.0;
  double bound_finite = 0.0;
  bool tight = false;
  bool vacuous = false;

  bool operator==(const ErrorReport&) const = default;
};

// `metric` is a metric on a set containing both the kernel's input and
// output points; points are matched by label.
absl::StatusOr<ErrorReport> ExpectedError(const FiniteKernel& kernel,
                                          const FiniteMetricSpace& metric,
                                          const PrivacyParams& params);

struct TightnessReport {
  std::size_t m = 0;
  double p = 0.0;
  double max_error = 0.0;
  double bound_finite = 0.0;
  bool tight = false;
  bool dp_passed = false;

  bool operator==(const TightnessReport&) const = default;
};

// Builds randomized response at the minimal private p on a discrete space and
// confirms it attains LowerBoundFinite and passes the exhaustive DP check.
absl::StatusOr<TightnessReport> CheckTightness(const FiniteMetricSpace& space,
                                               const PrivacyParams& params);

}  // namespace metricdp

#endif  // METRICDP_ACCURACY_H_
