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

#ifndef METRICDP_FUNCTIONAL_H_
#define METRICDP_FUNCTIONAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "metricdp/mechanism.h"

namespace metricdp {

// Functions on [0, 1] observed on a grid t_1 < ... < t_k, with values
// confined to [lo, hi].
class GridFunctionSpace {
 public:
  static absl::StatusOr<GridFunctionSpace> Create(std::vector<double> grid,
                                                  double lo, double hi);

  const std::vector<double>& grid() const { return grid_; }
  std::size_t k() const { return grid_.size(); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  // Largest L1 distance between two records: k * (hi - lo).
  double RecordDiameter() const {
    return static_cast<double>(k()) * (hi_ - lo_);
  }

 private:
  GridFunctionSpace(std::vector<double> grid, double lo, double hi)
      : grid_(std::move(grid)), lo_(lo), hi_(hi) {}

  std::vector<double> grid_;
  double lo_;
  double hi_;
};

// Samples f(t_1), ..., f(t_k) of one record.
class GridFunction {
 public:
  // Values are clipped into [lo, hi]; the length must equal k.
  static absl::StatusOr<GridFunction> Clipped(const GridFunctionSpace& space,
                                              std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  explicit GridFunction(std::vector<double> values)
      : values_(std::move(values)) {}

  std::vector<double> values_;
};

double SupDistance(const GridFunction& f, const GridFunction& g);
double L1Distance(const GridFunction& f, const GridFunction& g);

// Samples at the given grid positions (0-based, strictly increasing).
absl::StatusOr<std::vector<double>> Project(const GridFunction& f,
                                            std::span<const std::size_t> indices);

// b = k (hi - lo) / (epsilon - log(1 - delta)).
absl::StatusOr<double> FunctionalLaplaceScale(const GridFunctionSpace& space,
                                              const PrivacyParams& params);

// f(t_j) + Laplace(0, b) at every grid point, coordinate j on stream j of
// `seed`. Outputs are not clipped.
absl::StatusOr<std::vector<double>> SanitizeFunction(const GridFunction& f,
                                                     double b,
                                                     std::uint64_t seed);

// Analytic certificate for the projection of the noisy record onto a set of
// grid positions. The density ratio between any two records is at most
// worst_ratio = exp(|indices| (hi - lo) / b), and the projection is
// (epsilon, delta)-private when worst_ratio <= threshold = e^eps / (1 - delta).
struct ProjectionCertificate {
  std::vector<std::size_t> indices;
  double b = 0.0;
  double worst_ratio = 0.0;
  double threshold = 0.0;
  bool certified = false;

  bool operator==(const ProjectionCertificate&) const = default;
};

absl::StatusOr<ProjectionCertificate> CertifyProjectionDp(
    const GridFunctionSpace& space, double b, const PrivacyParams& params,
    std::span<const std::size_t> indices);

}  // namespace metricdp

#endif  // METRICDP_FUNCTIONAL_H_
