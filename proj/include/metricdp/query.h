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

#ifndef METRICDP_QUERY_H_
#define METRICDP_QUERY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "metricdp/metric_space.h"

namespace metricdp {

// Joins tuple labels with ','. Used for identity-query responses and for the
// keys of table queries.
std::string TupleLabel(const FiniteMetricSpace& space,
                       std::span<const std::size_t> tuple);

// A total function from n-tuples of points of a space to a finite response
// set E_Q = {0, ..., response_count() - 1}. Responses carry labels for I/O.
class FiniteQuery {
 public:
  using Evaluator = std::function<std::size_t(std::span<const std::size_t>)>;
  using Labeler = std::function<std::string(std::size_t)>;

  FiniteQuery(std::string name, std::size_t domain_size, std::size_t arity,
              std::uint64_t response_count, Evaluator evaluate,
              Labeler labeler);

  // Q = I_n: every tuple is its own response. Responses are numbered in
  // lexicographic tuple order (row 0 most significant).
  static absl::StatusOr<FiniteQuery> Identity(const FiniteMetricSpace& space,
                                              std::size_t n);
  // Number of rows equal to `label`; E_Q = {0, ..., n}.
  static absl::StatusOr<FiniteQuery> Count(const FiniteMetricSpace& space,
                                           std::string_view label,
                                           std::size_t n);
  // Most frequent point, ties going to the lowest index; E_Q = the space.
  static absl::StatusOr<FiniteQuery> Mode(const FiniteMetricSpace& space,
                                          std::size_t n);
  // A single response for every tuple.
  static absl::StatusOr<FiniteQuery> Constant(const FiniteMetricSpace& space,
                                              std::size_t n,
                                              std::string value = "c");
  // Per-point counts, labelled "c0;c1;...". E_Q holds every count vector
  // (including unreachable ones, which simply carry zero mass).
  static absl::StatusOr<FiniteQuery> Histogram(const FiniteMetricSpace& space,
                                               std::size_t n);
  // Extensional query: `table` maps TupleLabel keys to response labels and
  // must cover every tuple. Responses are numbered in sorted label order.
  static absl::StatusOr<FiniteQuery> Table(
      const FiniteMetricSpace& space, std::size_t n,
      const std::map<std::string, std::string>& table);

  const std::string& name() const { return name_; }
  std::size_t domain_size() const { return domain_size_; }
  std::size_t arity() const { return arity_; }
  std::uint64_t response_count() const { return response_count_; }

  std::size_t Evaluate(std::span<const std::size_t> tuple) const {
    return evaluate_(tuple);
  }
  std::string ResponseLabel(std::size_t response) const {
    return labeler_(response);
  }

 private:
  std::string name_;
  std::size_t domain_size_;
  std::size_t arity_;
  std::uint64_t response_count_;
  Evaluator evaluate_;
  Labeler labeler_;
};

// base^exponent, or an error once the result would exceed `limit`.
absl::StatusOr<std::uint64_t> CheckedPower(std::uint64_t base,
                                           std::uint64_t exponent,
                                           std::uint64_t limit);

// Mixed-radix tuple codec with row 0 as the most significant digit.
void DecodeTuple(std::uint64_t code, std::size_t radix,
                 std::span<std::size_t> tuple);
std::uint64_t EncodeTuple(std::span<const std::size_t> tuple,
                          std::size_t radix);

}  // namespace metricdp

#endif  // METRICDP_QUERY_H_
