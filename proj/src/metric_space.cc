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

#include "metricdp/metric_space.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace metricdp {
namespace {

absl::Status CheckDistinctLabels(const std::vector<std::string>& labels) {
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = seen.emplace(labels[i], i);
    if (!inserted) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate label '", labels[i], "' at indices ",
                       it->second, " and ", i));
    }
  }
  return absl::OkStatus();
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(Kind kind, std::vector<std::string> labels,
                                     std::vector<double> dist,
                                     std::vector<std::string> universe)
    : kind_(kind),
      labels_(std::move(labels)),
      dist_(std::move(dist)),
      universe_(std::move(universe)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
}

absl::StatusOr<FiniteMetricSpace> FiniteMetricSpace::Create(
    std::vector<std::string> labels, std::vector<std::vector<double>> dist) {
  const std::size_t n = labels.size();
  if (n == 0) return absl::InvalidArgumentError("metric space has no points");
  if (dist.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("distance matrix has ", dist.size(), " rows but there are ",
                     n, " labels"));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      return absl::InvalidArgumentError(absl::StrCat(
          "distance matrix row ", i, " has ", dist[i].size(),
          " entries, expected ", n));
    }
  }
  if (auto s = CheckDistinctLabels(labels); !s.ok()) return s;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dist[i][j];
      if (!std::isfinite(d) || d < 0.0) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-negativity violated: dist[", i, "][", j,
                         "] = ", d));
      }
      if (i == j && d != 0.0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "identity of indiscernibles violated: dist[", i, "][", i,
            "] = ", d, " must be 0"));
      }
      if (i != j && d == 0.0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "identity of indiscernibles violated: dist[", i, "][", j,
            "] = 0 for distinct points"));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(dist[i][j] - dist[j][i]) > kMetricAxiomTolerance) {
        return absl::InvalidArgumentError(absl::StrCat(
            "symmetry violated: dist[", i, "][", j, "] = ", dist[i][j],
            " but dist[", j, "][", i, "] = ", dist[j][i]));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dist[i][k] > dist[i][j] + dist[j][k] + kMetricAxiomTolerance) {
          return absl::InvalidArgumentError(absl::StrCat(
              "triangle inequality violated at (", i, ", ", j, ", ", k,
              "): dist[", i, "][", k, "] = ", dist[i][k], " > ", dist[i][j],
              " + ", dist[j][k]));
        }
      }
    }
  }

  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& row : dist) flat.insert(flat.end(), row.begin(), row.end());
  return FiniteMetricSpace(Kind::kMatrix, std::move(labels), std::move(flat),
                           {});
}

std::optional<std::size_t> FiniteMetricSpace::IndexOf(
    std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::vector<double>> FiniteMetricSpace::DistanceMatrix() const {
  std::vector<std::vector<double>> out(size(), std::vector<double>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) out[i][j] = distance(i, j);
  }
  return out;
}

bool FiniteMetricSpace::operator==(const FiniteMetricSpace& other) const {
  if (labels_ != other.labels_) return false;
  if (kind_ == other.kind_ && kind_ != Kind::kMatrix) return true;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (distance(i, j) != other.distance(i, j)) return false;
    }
  }
  return true;
}

absl::StatusOr<FiniteMetricSpace> BuildFiniteSpace(
    std::vector<std::string> labels, std::vector<std::vector<double>> dist) {
  return FiniteMetricSpace::Create(std::move(labels), std::move(dist));
}

absl::StatusOr<FiniteMetricSpace> DiscreteMetricSpace(
    std::vector<std::string> labels) {
  if (labels.size() < 2) {
    return absl::InvalidArgumentError(
        "discrete metric space needs at least 2 labels");
  }
  if (auto s = CheckDistinctLabels(labels); !s.ok()) return s;
  return FiniteMetricSpace(FiniteMetricSpace::Kind::kDiscrete,
                           std::move(labels), {}, {});
}

absl::StatusOr<FiniteMetricSpace> SymmetricDifferenceSpace(
    std::vector<std::string> universe) {
  if (universe.empty()) {
    return absl::InvalidArgumentError("power-set universe is empty");
  }
  if (universe.size() > kMaxPowersetUniverse) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "power-set universe has ", universe.size(),
        " elements; at most ", kMaxPowersetUniverse, " are supported"));
  }
  if (auto s = CheckDistinctLabels(universe); !s.ok()) return s;
  for (const auto& e : universe) {
    if (e.empty() || e.find(';') != std::string::npos) {
      return absl::InvalidArgumentError(absl::StrCat(
          "universe element '", e, "' must be nonempty and contain no ';'"));
    }
  }
  const std::size_t count = std::size_t{1} << universe.size();
  std::vector<std::string> labels;
  labels.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::vector<absl::string_view> members;
    for (std::size_t j = 0; j < universe.size(); ++j) {
      if (mask & (std::size_t{1} << j)) members.push_back(universe[j]);
    }
    labels.push_back(absl::StrJoin(members, ";"));
  }
  return FiniteMetricSpace(FiniteMetricSpace::Kind::kSymmetricDifference,
                           std::move(labels), {}, std::move(universe));
}

absl::StatusOr<SpaceStats> ComputeSubspaceStats(
    const FiniteMetricSpace& space, std::span<const std::size_t> points) {
  if (points.size() < 2) {
    return absl::InvalidArgumentError(
        "space statistics need at least 2 points (kappa undefined)");
  }
  SpaceStats stats;
  stats.m = points.size() - 1;
  stats.kappa = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a) {
    if (points[a] >= space.size()) {
      return absl::OutOfRangeError(
          absl::StrCat("point index ", points[a], " outside the space"));
    }
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const double d = space.distance(points[a], points[b]);
      stats.diam = std::max(stats.diam, d);
      if (d > 0.0) stats.kappa = std::min(stats.kappa, d);
    }
  }
  return stats;
}

absl::StatusOr<SpaceStats> ComputeSpaceStats(const FiniteMetricSpace& space) {
  if (space.size() < 2) {
    return absl::InvalidArgumentError(
        "space statistics need at least 2 points (kappa undefined)");
  }
  switch (space.kind()) {
    case FiniteMetricSpace::Kind::kDiscrete:
      return SpaceStats{1.0, 1.0, space.size() - 1};
    case FiniteMetricSpace::Kind::kSymmetricDifference:
      return SpaceStats{static_cast<double>(space.universe().size()), 1.0,
                        space.size() - 1};
    case FiniteMetricSpace::Kind::kMatrix:
      break;
  }
  std::vector<std::size_t> all(space.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return ComputeSubspaceStats(space, all);
}

absl::StatusOr<Database> Database::Create(const FiniteMetricSpace& space,
                                          std::vector<std::size_t> rows) {
  if (rows.empty()) return absl::InvalidArgumentError("database has no rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= space.size()) {
      return absl::OutOfRangeError(absl::StrCat(
          "row ", i, " refers to point ", rows[i], " but the space has ",
          space.size(), " points"));
    }
  }
  return Database(space.size(), std::move(rows));
}

absl::StatusOr<Database> Database::FromLabels(
    const FiniteMetricSpace& space, std::span<const std::string> labels) {
  std::vector<std::size_t> rows;
  rows.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto idx = space.IndexOf(labels[i]);
    if (!idx) {
      return absl::NotFoundError(
          absl::StrCat("row ", i, ": unknown label '", labels[i], "'"));
    }
    rows.push_back(*idx);
  }
  return Create(space, std::move(rows));
}

absl::StatusOr<std::size_t> Hamming(const Database& a, const Database& b) {
  if (a.n() != b.n()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "databases have different lengths: ", a.n(), " vs ", b.n()));
  }
  if (a.space_size() != b.space_size()) {
    return absl::InvalidArgumentError(
        "databases are drawn from different spaces");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.n(); ++i) count += a[i] != b[i];
  return count;
}

}  // namespace metricdp
