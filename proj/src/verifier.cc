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

#include "metricdp/verifier.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace metricdp {
namespace {

// Subset sums of a probability vector split into a low and a high half, so
// that P(A) = low[A & low_mask] + high[A >> low_bits] in O(1) per event.
struct SubsetSums {
  std::size_t low_bits = 0;
  std::vector<double> low;
  std::vector<double> high;
};

SubsetSums BuildSubsetSums(std::span<const double> p) {
  SubsetSums s;
  const std::size_t k = p.size();
  s.low_bits = k / 2;
  const std::size_t high_bits = k - s.low_bits;
  auto fill = [](std::vector<double>& table, std::span<const double> values) {
    table.assign(std::size_t{1} << values.size(), 0.0);
    for (std::size_t m = 1; m < table.size(); ++m) {
      table[m] = table[m & (m - 1)] + values[std::countr_zero(m)];
    }
  };
  fill(s.low, p.subspan(0, s.low_bits));
  fill(s.high, p.subspan(s.low_bits, high_bits));
  return s;
}

struct ScanBest {
  double violation = -std::numeric_limits<double>::infinity();
  std::size_t pair = 0;
  std::uint64_t mask = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct OrderedPair {
  std::size_t from;
  std::size_t to;
};

// Scans every event for pairs [begin, end). Ties keep the earliest pair and
// the smallest mask.
ScanBest ScanRange(const std::vector<SubsetSums>& sums,
                   const std::vector<OrderedPair>& pairs, std::size_t begin,
                   std::size_t end, double exp_eps, double delta) {
  ScanBest best;
  for (std::size_t idx = begin; idx < end; ++idx) {
    const SubsetSums& p = sums[pairs[idx].from];
    const SubsetSums& q = sums[pairs[idx].to];
    const std::size_t low_count = p.low.size();
    for (std::size_t h = 0; h < p.high.size(); ++h) {
      const double ph = p.high[h];
      const double qh = q.high[h];
      for (std::size_t l = 0; l < low_count; ++l) {
        const double lhs = p.low[l] + ph;
        const double rhs = exp_eps * (q.low[l] + qh) + delta;
        const double v = lhs - rhs;
        if (v > best.violation) {
          best.violation = v;
          best.pair = idx;
          best.mask = (static_cast<std::uint64_t>(h) << p.low_bits) | l;
          best.lhs = lhs;
          best.rhs = rhs;
        }
      }
    }
  }
  return best;
}

using Labeler = std::function<std::string(std::size_t)>;

// Shared engine behind every check: `laws` are probability vectors over a
// common output set of size k, `pairs` index into them.
absl::StatusOr<VerificationReport> ScanLaws(
    const std::vector<std::vector<double>>& laws,
    const std::vector<OrderedPair>& pairs, const PrivacyParams& params,
    const VerifyOptions& options, const Labeler& input_label,
    const Labeler& output_label) {
  const std::size_t k = laws.empty() ? 0 : laws.front().size();
  if (k > kMaxExhaustiveOutputs) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "event enumeration over ", k, " outputs exceeds the limit of ",
        kMaxExhaustiveOutputs));
  }
  std::vector<SubsetSums> sums;
  sums.reserve(laws.size());
  for (const auto& law : laws) sums.push_back(BuildSubsetSums(law));

  const double exp_eps = std::exp(params.epsilon());
  const double delta = params.delta();

  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(options.threads, pairs.size()));
  std::vector<ScanBest> partial(workers);
  if (workers == 1) {
    partial[0] = ScanRange(sums, pairs, 0, pairs.size(), exp_eps, delta);
  } else {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (pairs.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(pairs.size(), w * chunk);
      const std::size_t end = std::min(pairs.size(), begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        partial[w] = ScanRange(sums, pairs, begin, end, exp_eps, delta);
      });
    }
  }
  ScanBest best;
  for (const ScanBest& b : partial) {
    if (b.violation > best.violation) best = b;
  }

  VerificationReport report;
  report.pairs_checked = pairs.size();
  report.events_checked = std::uint64_t{1} << k;
  report.max_violation = pairs.empty() ? -delta : best.violation;
  report.passed = report.max_violation <= options.tolerance;
  if (!report.passed) {
    Witness w;
    w.d = input_label(pairs[best.pair].from);
    w.d_prime = input_label(pairs[best.pair].to);
    for (std::size_t y = 0; y < k; ++y) {
      if (best.mask & (std::uint64_t{1} << y)) w.event.push_back(output_label(y));
    }
    w.lhs = best.lhs;
    w.rhs = best.rhs;
    report.witness = std::move(w);
  }
  return report;
}

// Every ordered neighbouring pair of D^n, databases coded lexicographically.
std::vector<OrderedPair> NeighbourPairs(std::size_t d_size, std::size_t n,
                                        std::uint64_t db_count) {
  std::vector<std::uint64_t> weight(n);
  std::uint64_t w = 1;
  for (std::size_t i = n; i-- > 0;) {
    weight[i] = w;
    w *= d_size;
  }
  std::vector<OrderedPair> pairs;
  pairs.reserve(db_count * n * (d_size - 1));
  std::vector<std::size_t> rows(n);
  for (std::uint64_t code = 0; code < db_count; ++code) {
    DecodeTuple(code, d_size, rows);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t v = 0; v < d_size; ++v) {
        if (v == rows[i]) continue;
        const std::uint64_t other = code - rows[i] * weight[i] + v * weight[i];
        pairs.push_back({static_cast<std::size_t>(code),
                         static_cast<std::size_t>(other)});
      }
    }
  }
  return pairs;
}

Labeler TupleLabeler(const FiniteMetricSpace& space, std::size_t n) {
  return [&space, n](std::size_t code) {
    std::vector<std::size_t> tuple(n);
    DecodeTuple(code, space.size(), tuple);
    return TupleLabel(space, tuple);
  };
}

}  // namespace

absl::StatusOr<VerificationReport> CheckDp1dExhaustive(
    const FiniteKernel& kernel, const PrivacyParams& params,
    const VerifyOptions& options) {
  if (kernel.output_size() > kMaxExhaustiveOutputs) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "|U| = ", kernel.output_size(), " exceeds ", kMaxExhaustiveOutputs,
        " outputs; use DeltaSlackClosedForm instead"));
  }
  std::vector<std::vector<double>> laws;
  laws.reserve(kernel.input_size());
  for (std::size_t d = 0; d < kernel.input_size(); ++d) {
    auto row = kernel.row(d);
    laws.emplace_back(row.begin(), row.end());
  }
  std::vector<OrderedPair> pairs;
  for (std::size_t d = 0; d < kernel.input_size(); ++d) {
    for (std::size_t e = 0; e < kernel.input_size(); ++e) {
      if (d != e) pairs.push_back({d, e});
    }
  }
  const FiniteMetricSpace& in = kernel.input_space();
  const FiniteMetricSpace& out = kernel.output_space();
  return ScanLaws(
      laws, pairs, params, options,
      [&in](std::size_t i) { return in.label(i); },
      [&out](std::size_t y) { return out.label(y); });
}

absl::StatusOr<double> DeltaSlackClosedForm(const FiniteKernel& kernel,
                                            double epsilon) {
  if (!(epsilon >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be >= 0, got ", epsilon));
  }
  const double exp_eps = std::exp(epsilon);
  double slack = 0.0;
  for (std::size_t d = 0; d < kernel.input_size(); ++d) {
    auto p = kernel.row(d);
    for (std::size_t e = 0; e < kernel.input_size(); ++e) {
      if (d == e) continue;
      auto q = kernel.row(e);
      double gap = 0.0;
      for (std::size_t y = 0; y < p.size(); ++y) {
        gap += std::max(0.0, p[y] - exp_eps * q[y]);
      }
      slack = std::max(slack, gap);
    }
  }
  return std::clamp(slack, 0.0, 1.0);
}

absl::StatusOr<VerificationReport> CheckDpProductBruteforce(
    const ProductMechanism& mech, const PrivacyParams& params,
    const VerifyOptions& options) {
  const FiniteKernel& base = mech.base();
  auto outcomes = CheckedPower(base.output_size(), mech.n(), kMaxProductOutcomes);
  if (!outcomes.ok()) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "|U|^n = ", base.output_size(), "^", mech.n(),
        " exceeds ", kMaxProductOutcomes,
        " outcomes; check the one-row kernel with CheckDp1dExhaustive, "
        "which is equivalent for product mechanisms"));
  }
  auto databases =
      CheckedPower(base.input_size(), mech.n(), kMaxEnumeratedOutcomes);
  if (!databases.ok()) return databases.status();

  std::vector<std::vector<double>> laws(*databases);
  std::vector<std::size_t> rows(mech.n());
  for (std::uint64_t code = 0; code < *databases; ++code) {
    DecodeTuple(code, base.input_size(), rows);
    laws[code] = mech.LawUnchecked(rows);
  }
  auto pairs = NeighbourPairs(base.input_size(), mech.n(), *databases);
  return ScanLaws(laws, pairs, params, options,
                  TupleLabeler(base.input_space(), mech.n()),
                  TupleLabeler(base.output_space(), mech.n()));
}

absl::StatusOr<VerificationReport> CheckQueryDp(const ProductMechanism& mech,
                                                const FiniteQuery& query,
                                                const PrivacyParams& params,
                                                const VerifyOptions& options) {
  const FiniteKernel& base = mech.base();
  if (query.domain_size() != base.output_size() || query.arity() != mech.n()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "query '", query.name(), "' does not match the mechanism's output "
        "tuples"));
  }
  auto outcomes =
      CheckedPower(base.output_size(), mech.n(), kMaxEnumeratedOutcomes);
  if (!outcomes.ok()) return outcomes.status();
  auto databases =
      CheckedPower(base.input_size(), mech.n(), kMaxEnumeratedOutcomes);
  if (!databases.ok()) return databases.status();
  if (*databases * *outcomes > 10 * kMaxEnumeratedOutcomes ||
      query.response_count() > kMaxEnumeratedOutcomes) {
    return absl::ResourceExhaustedError(
        "pushforward laws over every database exceed the capacity limit");
  }

  std::vector<std::vector<double>> dense(*databases);
  std::vector<std::size_t> rows(mech.n());
  std::vector<bool> reachable(query.response_count(), false);
  for (std::uint64_t code = 0; code < *databases; ++code) {
    DecodeTuple(code, base.input_size(), rows);
    dense[code] = PushforwardUnchecked(mech, rows, query);
    for (std::size_t r = 0; r < dense[code].size(); ++r) {
      if (dense[code][r] > 0.0) reachable[r] = true;
    }
  }
  // Responses with zero mass under every database change neither side of
  // the inequality, so events range over the common support only.
  std::vector<std::size_t> support;
  for (std::size_t r = 0; r < reachable.size(); ++r) {
    if (reachable[r]) support.push_back(r);
  }
  if (support.size() > kMaxExhaustiveOutputs) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "query support has ", support.size(), " responses; at most ",
        kMaxExhaustiveOutputs, " can be enumerated"));
  }
  std::vector<std::vector<double>> laws(*databases);
  for (std::uint64_t code = 0; code < *databases; ++code) {
    laws[code].reserve(support.size());
    for (std::size_t r : support) laws[code].push_back(dense[code][r]);
  }
  auto pairs = NeighbourPairs(base.input_size(), mech.n(), *databases);
  return ScanLaws(
      laws, pairs, params, options, TupleLabeler(base.input_space(), mech.n()),
      [&query, &support](std::size_t y) {
        return query.ResponseLabel(support[y]);
      });
}

absl::StatusOr<VerificationReport> CheckOutputPerturbationDp(
    const OutputPerturbation& mech, const FiniteMetricSpace& data_space,
    const PrivacyParams& params, const VerifyOptions& options) {
  const FiniteQuery& query = mech.query();
  if (query.domain_size() != data_space.size()) {
    return absl::InvalidArgumentError(
        "data space does not match the query's domain");
  }
  const FiniteKernel& kernel = mech.response_kernel();
  if (kernel.output_size() > kMaxExhaustiveOutputs) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "response kernel has ", kernel.output_size(), " outputs; at most ",
        kMaxExhaustiveOutputs, " can be enumerated"));
  }
  auto databases =
      CheckedPower(data_space.size(), query.arity(), kMaxEnumeratedOutcomes);
  if (!databases.ok()) return databases.status();
  std::vector<std::vector<double>> laws(*databases);
  std::vector<std::size_t> rows(query.arity());
  for (std::uint64_t code = 0; code < *databases; ++code) {
    DecodeTuple(code, data_space.size(), rows);
    auto law = mech.LawUnchecked(rows);
    laws[code].assign(law.begin(), law.end());
  }
  auto pairs = NeighbourPairs(data_space.size(), query.arity(), *databases);
  const FiniteMetricSpace& out = kernel.output_space();
  return ScanLaws(laws, pairs, params, options,
                  TupleLabeler(data_space, query.arity()),
                  [&out](std::size_t y) { return out.label(y); });
}

absl::StatusOr<RectangleDecomposition> DecomposeRectangles(
    const std::vector<Rectangle>& rects) {
  if (rects.empty()) {
    return absl::InvalidArgumentError("no rectangles to decompose");
  }
  if (rects.size() > kMaxRectangles) {
    return absl::ResourceExhaustedError(absl::StrCat(
        rects.size(), " rectangles exceed the limit of ", kMaxRectangles));
  }
  for (std::size_t i = 0; i < rects.size(); ++i) {
    if (rects[i].a.empty() || rects[i].b.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("rectangle ", i, " has an empty factor"));
    }
  }
  // A point b of the second factor lies in the part whose index set is
  // exactly {i : b in B_i}.
  std::map<std::uint32_t, PointSet> by_membership;
  PointSet all_b;
  for (const auto& r : rects) all_b.insert(r.b.begin(), r.b.end());
  for (const auto& point : all_b) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < rects.size(); ++i) {
      if (rects[i].b.contains(point)) mask |= std::uint32_t{1} << i;
    }
    by_membership[mask].insert(point);
  }
  RectangleDecomposition out;
  for (auto& [mask, points] : by_membership) {
    RectangleDecompositionPart part;
    for (std::size_t i = 0; i < rects.size(); ++i) {
      if (mask & (std::uint32_t{1} << i)) {
        part.indices.push_back(i);
        part.rect.a.insert(rects[i].a.begin(), rects[i].a.end());
      }
    }
    part.rect.b = std::move(points);
    out.parts.push_back(std::move(part));
  }
  return out;
}

}  // namespace metricdp
