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

#include "metricdp/functional.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "metricdp/rng.h"

namespace metricdp {

absl::StatusOr<GridFunctionSpace> GridFunctionSpace::Create(
    std::vector<double> grid, double lo, double hi) {
  if (grid.empty()) return absl::InvalidArgumentError("grid is empty");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= 0.0 && grid[j] <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("grid time ", grid[j], " at position ", j,
                       " lies outside [0, 1]"));
    }
    if (j > 0 && !(grid[j] > grid[j - 1])) {
      return absl::InvalidArgumentError(
          absl::StrCat("grid is not strictly increasing at position ", j));
    }
  }
  if (!(lo < hi) || std::isinf(lo) || std::isinf(hi)) {
    return absl::InvalidArgumentError(
        absl::StrCat("value bounds must satisfy finite lo < hi, got [", lo,
                     ", ", hi, "]"));
  }
  return GridFunctionSpace(std::move(grid), lo, hi);
}

absl::StatusOr<GridFunction> GridFunction::Clipped(
    const GridFunctionSpace& space, std::vector<double> values) {
  if (values.size() != space.k()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "record has ", values.size(), " samples but the grid has ", space.k()));
  }
  for (double& v : values) {
    if (std::isnan(v)) return absl::InvalidArgumentError("record value is NaN");
    v = std::clamp(v, space.lo(), space.hi());
  }
  return GridFunction(std::move(values));
}

double SupDistance(const GridFunction& f, const GridFunction& g) {
  double out = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    out = std::max(out, std::abs(f.values()[j] - g.values()[j]));
  }
  return out;
}

double L1Distance(const GridFunction& f, const GridFunction& g) {
  double out = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    out += std::abs(f.values()[j] - g.values()[j]);
  }
  return out;
}

namespace {

absl::Status ValidateIndices(std::span<const std::size_t> indices,
                             std::size_t k) {
  if (indices.empty()) {
    return absl::InvalidArgumentError("projection index set is empty");
  }
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= k) {
      return absl::OutOfRangeError(absl::StrCat(
          "projection index ", indices[i], " out of range for k = ", k));
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      return absl::InvalidArgumentError(
          "projection indices must be strictly increasing");
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<double>> Project(
    const GridFunction& f, std::span<const std::size_t> indices) {
  if (auto s = ValidateIndices(indices, f.size()); !s.ok()) return s;
  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t j : indices) out.push_back(f.values()[j]);
  return out;
}

absl::StatusOr<double> FunctionalLaplaceScale(const GridFunctionSpace& space,
                                              const PrivacyParams& params) {
  return LaplaceScale(space.RecordDiameter(), params);
}

absl::StatusOr<std::vector<double>> SanitizeFunction(const GridFunction& f,
                                                     double b,
                                                     std::uint64_t seed) {
  if (!(b > 0.0) || std::isinf(b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be finite and > 0, got ", b));
  }
  std::vector<double> out(f.values());
  for (std::size_t j = 0; j < out.size(); ++j) {
    Stream stream(seed, j);
    out[j] += stream.NextLaplace(b);
  }
  return out;
}

absl::StatusOr<ProjectionCertificate> CertifyProjectionDp(
    const GridFunctionSpace& space, double b, const PrivacyParams& params,
    std::span<const std::size_t> indices) {
  if (auto s = ValidateIndices(indices, space.k()); !s.ok()) return s;
  if (!(b > 0.0) || std::isinf(b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be finite and > 0, got ", b));
  }
  const double exponent =
      static_cast<double>(indices.size()) * (space.hi() - space.lo()) / b;
  const double budget = params.delta() == 1.0
                            ? std::numeric_limits<double>::infinity()
                            : params.epsilon() - std::log1p(-params.delta());

  ProjectionCertificate cert;
  cert.indices.assign(indices.begin(), indices.end());
  cert.b = b;
  cert.worst_ratio = std::exp(exponent);
  cert.threshold = std::exp(budget);
  // Compared in log space; the relative slack absorbs the rounding in b.
  cert.certified = exponent <= budget * (1.0 + 1e-12);
  return cert;
}

}  // namespace metricdp
