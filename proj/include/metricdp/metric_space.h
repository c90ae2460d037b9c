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

#ifndef METRICDP_METRIC_SPACE_H_
#define METRICDP_METRIC_SPACE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"

namespace metricdp {

// Tolerance applied to the symmetry and triangle-inequality checks when a
// distance matrix is validated. The zero diagonal is checked exactly.
inline constexpr double kMetricAxiomTolerance = 1e-12;

// Largest universe accepted by SymmetricDifferenceSpace.
inline constexpr std::size_t kMaxPowersetUniverse = 16;

// A finite metric space. Points are addressed by position; labels are only
// used for input and output. Instances are immutable once built.
//
// Three representations are supported: an explicit distance matrix, the
// discrete metric, and the symmetric-difference metric on the power set of a
// universe. The latter two compute distances on the fly so that large spaces
// do not materialise a quadratic matrix.
class FiniteMetricSpace {
 public:
  enum class Kind { kMatrix, kDiscrete, kSymmetricDifference };

  // Validates the metric axioms on `dist` and builds a matrix-backed space.
  static absl::StatusOr<FiniteMetricSpace> Create(
      std::vector<std::string> labels, std::vector<std::vector<double>> dist);

  Kind kind() const { return kind_; }
  std::size_t size() const { return labels_.size(); }

  double distance(std::size_t i, std::size_t j) const {
    switch (kind_) {
      case Kind::kDiscrete:
        return i == j ? 0.0 : 1.0;
      case Kind::kSymmetricDifference:
        return static_cast<double>(
            __builtin_popcountll(static_cast<std::uint64_t>(i ^ j)));
      case Kind::kMatrix:
        break;
    }
    return dist_[i * labels_.size() + j];
  }

  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> IndexOf(std::string_view label) const;

  // Universe of a symmetric-difference space; empty for other kinds. Point
  // i of such a space is the subset whose bit j is set iff universe()[j] is a
  // member.
  const std::vector<std::string>& universe() const { return universe_; }

  // Full distance matrix, materialised on demand.
  std::vector<std::vector<double>> DistanceMatrix() const;

  // Structural equality: same labels and same distances.
  bool operator==(const FiniteMetricSpace& other) const;

 private:
  friend absl::StatusOr<FiniteMetricSpace> DiscreteMetricSpace(
      std::vector<std::string> labels);
  friend absl::StatusOr<FiniteMetricSpace> SymmetricDifferenceSpace(
      std::vector<std::string> universe);

  FiniteMetricSpace(Kind kind, std::vector<std::string> labels,
                    std::vector<double> dist,
                    std::vector<std::string> universe);

  Kind kind_;
  std::vector<std::string> labels_;
  std::vector<double> dist_;  // row-major, only for kMatrix
  std::vector<std::string> universe_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Same as FiniteMetricSpace::Create.
absl::StatusOr<FiniteMetricSpace> BuildFiniteSpace(
    std::vector<std::string> labels, std::vector<std::vector<double>> dist);

// rho(x, y) = 1 for x != y. Requires at least two distinct labels.
absl::StatusOr<FiniteMetricSpace> DiscreteMetricSpace(
    std::vector<std::string> labels);

// All subsets of `universe` under rho(A, B) = |A symmetric-difference B|.
// Subset labels list their members in universe order separated by ';', the
// empty set being the empty string.
absl::StatusOr<FiniteMetricSpace> SymmetricDifferenceSpace(
    std::vector<std::string> universe);

struct SpaceStats {
  double diam = 0.0;
  double kappa = 0.0;  // minimum positive pairwise distance
  std::size_t m = 0;   // number of points minus one
};

absl::StatusOr<SpaceStats> ComputeSpaceStats(const FiniteMetricSpace& space);

// Stats of the subspace spanned by `points` (indices into `space`).
absl::StatusOr<SpaceStats> ComputeSubspaceStats(
    const FiniteMetricSpace& space, std::span<const std::size_t> points);

// A database of n >= 1 rows, each an index into a FiniteMetricSpace.
class Database {
 public:
  static absl::StatusOr<Database> Create(const FiniteMetricSpace& space,
                                         std::vector<std::size_t> rows);
  static absl::StatusOr<Database> FromLabels(
      const FiniteMetricSpace& space, std::span<const std::string> labels);

  std::size_t n() const { return rows_.size(); }
  std::size_t space_size() const { return space_size_; }
  std::size_t operator[](std::size_t i) const { return rows_[i]; }
  const std::vector<std::size_t>& rows() const { return rows_; }

  bool operator==(const Database& other) const = default;

 private:
  Database(std::size_t space_size, std::vector<std::size_t> rows)
      : space_size_(space_size), rows_(std::move(rows)) {}

  std::size_t space_size_;
  std::vector<std::size_t> rows_;
};

// Number of positions at which two databases differ. Neighbouring databases
// are exactly those at Hamming distance one.
absl::StatusOr<std::size_t> Hamming(const Database& a, const Database& b);

}  // namespace metricdp

#endif  // METRICDP_METRIC_SPACE_H_
