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

#include "metricdp/accuracy.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "metricdp/verifier.h"

namespace metricdp {
namespace {

absl::StatusOr<std::vector<std::size_t>> EmbedLabels(
    const FiniteMetricSpace& from, const FiniteMetricSpace& into,
    std::string_view role) {
  std::vector<std::size_t> out(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    auto idx = into.IndexOf(from.label(i));
    if (!idx) {
      return absl::InvalidArgumentError(
          absl::StrCat(std::string(role), " point '", from.label(i),
                       "' is not a point of the error metric space"));
    }
    out[i] = *idx;
  }
  return out;
}

bool WithinTightness(double a, double b) {
  return std::abs(a - b) <= kTightnessTolerance * std::max(1.0, std::abs(b));
}

}  // namespace

absl::StatusOr<LowerBound> LowerBoundGeneral(double diam,
                                             const PrivacyParams& params) {
  if (!(diam > 0.0) || std::isinf(diam)) {
    return absl::InvalidArgumentError(
        absl::StrCat("diameter must be finite and > 0, got ", diam));
  }
  if (params.delta() == 1.0) return LowerBound{0.0, true};
  return LowerBound{(1.0 - params.delta()) * diam /
                        (2.0 * (1.0 + std::exp(params.epsilon()))),
                    false};
}

absl::StatusOr<LowerBound> LowerBoundFinite(double kappa, std::size_t m,
                                            const PrivacyParams& params) {
  if (!(kappa > 0.0) || std::isinf(kappa)) {
    return absl::InvalidArgumentError(
        absl::StrCat("kappa must be finite and > 0, got ", kappa));
  }
  if (m < 1) return absl::InvalidArgumentError("m must be >= 1");
  if (params.delta() == 1.0) return LowerBound{0.0, true};
  const double md = static_cast<double>(m);
  return LowerBound{(1.0 - params.delta()) * kappa * md /
                        (md + std::exp(params.epsilon())),
                    false};
}

absl::StatusOr<ErrorReport> ExpectedError(const FiniteKernel& kernel,
                                          const FiniteMetricSpace& metric,
                                          const PrivacyParams& params) {
  auto inputs = EmbedLabels(kernel.input_space(), metric, "input");
  if (!inputs.ok()) return inputs.status();
  auto outputs = EmbedLabels(kernel.output_space(), metric, "output");
  if (!outputs.ok()) return outputs.status();
  auto stats = ComputeSubspaceStats(metric, *inputs);
  if (!stats.ok()) return stats.status();

  ErrorReport report;
  for (std::size_t d = 0; d < kernel.input_size(); ++d) {
    auto row = kernel.row(d);
    double err = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y) {
      err += row[y] * metric.distance((*outputs)[y], (*inputs)[d]);
    }
    report.per_point.push_back({kernel.input_space().label(d), err});
    report.max_error = std::max(report.max_error, err);
  }
  auto general = LowerBoundGeneral(stats->diam, params);
  if (!general.ok()) return general.status();
  auto finite = LowerBoundFinite(stats->kappa, stats->m, params);
  if (!finite.ok()) return finite.status();
  report.bound_general = general->value;
  report.bound_finite = finite->value;
  report.vacuous = finite->vacuous;
  report.tight = WithinTightness(report.max_error, report.bound_finite);
  return report;
}

absl::StatusOr<TightnessReport> CheckTightness(const FiniteMetricSpace& space,
                                               const PrivacyParams& params) {
  if (space.size() < 2) {
    return absl::InvalidArgumentError("tightness check needs >= 2 points");
  }
  if (params.delta() >= 1.0) {
    return absl::InvalidArgumentError("tightness check needs delta < 1");
  }
  if (space.kind() != FiniteMetricSpace::Kind::kDiscrete) {
    for (std::size_t i = 0; i < space.size(); ++i) {
      for (std::size_t j = 0; j < space.size(); ++j) {
        if (i != j && space.distance(i, j) != 1.0) {
          return absl::InvalidArgumentError(absl::StrCat(
              "tightness check needs the discrete metric; distance(", i, ", ",
              j, ") = ", space.distance(i, j)));
        }
      }
    }
  }
  auto kernel = CalibratedRandomizedResponse(space, params);
  if (!kernel.ok()) return kernel.status();
  auto errors = ExpectedError(*kernel, space, params);
  if (!errors.ok()) return errors.status();
  bool dp_passed = false;
  if (kernel->output_size() <= kMaxExhaustiveOutputs) {
    auto dp = CheckDp1dExhaustive(*kernel, params);
    if (!dp.ok()) return dp.status();
    dp_passed = dp->passed;
  } else {
    auto slack = DeltaSlackClosedForm(*kernel, params.epsilon());
    if (!slack.ok()) return slack.status();
    dp_passed = *slack <= params.delta() + kDefaultViolationTolerance;
  }

  TightnessReport report;
  report.m = space.size() - 1;
  report.p = kernel->prob(0, 1);
  report.max_error = errors->max_error;
  report.bound_finite = errors->bound_finite;
  report.tight = errors->tight;
  report.dp_passed = dp_passed;
  return report;
}

}  // namespace metricdp
