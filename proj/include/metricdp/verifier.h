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

#ifndef METRICDP_VERIFIER_H_
#define METRICDP_VERIFIER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "metricdp/mechanism.h"
#include "metricdp/metric_space.h"
#include "metricdp/query.h"

namespace metricdp {

inline constexpr double kDefaultViolationTolerance = 1e-9;

// Event enumeration limits: 2^k events are scanned per ordered pair.
inline constexpr std::size_t kMaxExhaustiveOutputs = 24;
inline constexpr std::uint64_t kMaxProductOutcomes = 20;

struct VerifyOptions {
  double tolerance = kDefaultViolationTolerance;
  // Worker threads for the pair loop. Results do not depend on this.
  unsigned threads = 1;
};

// A pair of inputs and an event A for which
//   lhs = P(X_d in A)  >  rhs = e^epsilon * P(X_d' in A) + delta.
struct Witness {
  std::string d;
  std::string d_prime;
  std::vector<std::string> event;
  double lhs = 0.0;
  double rhs = 0.0;

  bool operator==(const Witness&) const = default;
};

// Outcome of an (epsilon, delta) check. max_violation is the largest value of
// P(X_d in A) - e^epsilon P(X_d' in A) - delta over every ordered pair and
// every event, so passed == (max_violation <= tolerance). The witness is the
// first maximal violator, pairs in enumeration order and events in increasing
// bitmask order, and is present iff the check failed. events_checked is the
// number of events scanned per ordered pair.
struct VerificationReport {
  bool passed = true;
  std::optional<Witness> witness;
  double max_violation = 0.0;
  std::uint64_t pairs_checked = 0;
  std::uint64_t events_checked = 0;

  bool operator==(const VerificationReport&) const = default;
};

// Checks the DP inequality for every ordered pair d != d' of input points and
// every event A of the output space. Requires |U| <= 24.
absl::StatusOr<VerificationReport> CheckDp1dExhaustive(
    const FiniteKernel& kernel, const PrivacyParams& params,
    const VerifyOptions& options = {});

// Minimal delta for which the kernel is (epsilon, delta)-private:
//   max over d != d' of sum_y max(0, P(X_d = y) - e^epsilon P(X_d' = y)),
// clamped to [0, 1]. The maximising event is {y : P(X_d = y) > e^eps P(X_d' = y)}.
absl::StatusOr<double> DeltaSlackClosedForm(const FiniteKernel& kernel,
                                            double epsilon);

// Brute force over D^n: every neighbouring pair of databases (both
// directions) and every subset of U^n. Requires |U|^n <= 20.
absl::StatusOr<VerificationReport> CheckDpProductBruteforce(
    const ProductMechanism& mech, const PrivacyParams& params,
    const VerifyOptions& options = {});

// Checks the DP inequality on the laws of Q(X_db) for every neighbouring pair
// in D^n. Events range over the responses that carry positive mass for some
// database, at most 24 of them.
absl::StatusOr<VerificationReport> CheckQueryDp(
    const ProductMechanism& mech, const FiniteQuery& query,
    const PrivacyParams& params, const VerifyOptions& options = {});

// Checks an output-perturbation mechanism over D^n, D = data_space and n the
// query arity. Events range over the response kernel's output space.
absl::StatusOr<VerificationReport> CheckOutputPerturbationDp(
    const OutputPerturbation& mech, const FiniteMetricSpace& data_space,
    const PrivacyParams& params, const VerifyOptions& options = {});

using PointSet = std::set<std::string>;

struct Rectangle {
  PointSet a;
  PointSet b;

  bool operator==(const Rectangle&) const = default;
};

struct RectangleDecompositionPart {
  std::vector<std::size_t> indices;  // the index set I, 0-based
  Rectangle rect;

  bool operator==(const RectangleDecompositionPart&) const = default;
};

// Rewrites a union of rectangles A_i x B_i as a union of rectangles with
// pairwise disjoint second factors. Part I has first factor the union of
// A_i over i in I and second factor the points lying in B_i exactly for
// i in I. Parts with an empty second factor are dropped; the rest appear in
// increasing order of the bitmask of I.
struct RectangleDecomposition {
  std::vector<RectangleDecompositionPart> parts;

  bool operator==(const RectangleDecomposition&) const = default;
};

inline constexpr std::size_t kMaxRectangles = 16;

absl::StatusOr<RectangleDecomposition> DecomposeRectangles(
    const std::vector<Rectangle>& rects);

}  // namespace metricdp

#endif  // METRICDP_VERIFIER_H_
