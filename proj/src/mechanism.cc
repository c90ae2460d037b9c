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

#include "metricdp/mechanism.h"

#include <cmath>
#include <map>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "metricdp/rng.h"

namespace metricdp {
namespace {

absl::Status ValidateStochastic(const std::vector<std::vector<double>>& probs,
                                std::size_t rows, std::size_t cols) {
  if (probs.size() != rows) {
    return absl::InvalidArgumentError(absl::StrCat(
        "probability matrix has ", probs.size(), " rows, expected ", rows));
  }
  for (std::size_t d = 0; d < rows; ++d) {
    if (probs[d].size() != cols) {
      return absl::InvalidArgumentError(
          absl::StrCat("probability row ", d, " has ", probs[d].size(),
                       " entries, expected ", cols));
    }
    double sum = 0.0;
    for (std::size_t y = 0; y < cols; ++y) {
      const double p = probs[d][y];
      if (!(p >= 0.0 && p <= 1.0)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "probability probs[", d, "][", y, "] = ", p, " outside [0, 1]"));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("probability row ", d, " sums to ", sum));
    }
  }
  return absl::OkStatus();
}

std::vector<std::vector<double>> RandomizedResponseMatrix(std::size_t size,
                                                          double p) {
  const double keep = 1.0 - p * static_cast<double>(size - 1);
  std::vector<std::vector<double>> probs(size, std::vector<double>(size, p));
  for (std::size_t d = 0; d < size; ++d) probs[d][d] = keep;
  return probs;
}

std::size_t DrawFromRow(std::span<const double> row, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t y = 0; y < row.size(); ++y) {
    if (row[y] <= 0.0) continue;
    last_positive = y;
    cumulative += row[y];
    if (u < cumulative) return y;
  }
  return last_positive;
}

}  // namespace

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    double delta) {
  if (!(epsilon >= 0.0) || std::isinf(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and >= 0, got ", epsilon));
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in [0, 1], got ", delta));
  }
  return PrivacyParams(epsilon, delta);
}

absl::StatusOr<FiniteKernel> FiniteKernel::Create(
    FiniteMetricSpace input_space, FiniteMetricSpace output_space,
    std::vector<std::vector<double>> probs) {
  if (auto s = ValidateStochastic(probs, input_space.size(),
                                  output_space.size());
      !s.ok()) {
    return s;
  }
  std::vector<double> flat;
  flat.reserve(input_space.size() * output_space.size());
  for (const auto& row : probs) flat.insert(flat.end(), row.begin(), row.end());
  return FiniteKernel(std::move(input_space), std::move(output_space),
                      std::move(flat));
}

absl::StatusOr<FiniteKernel> FiniteKernel::Create(
    FiniteMetricSpace space, std::vector<std::vector<double>> probs) {
  FiniteMetricSpace output = space;
  return Create(std::move(space), std::move(output), std::move(probs));
}

std::vector<std::vector<double>> FiniteKernel::ProbabilityMatrix() const {
  std::vector<std::vector<double>> out;
  out.reserve(input_size());
  for (std::size_t d = 0; d < input_size(); ++d) {
    auto r = row(d);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

absl::StatusOr<FiniteKernel> RandomizedResponseKernel(
    const FiniteMetricSpace& space, double p) {
  if (space.size() < 2) {
    return absl::InvalidArgumentError(
        "randomized response needs at least 2 points");
  }
  const double m = static_cast<double>(space.size() - 1);
  if (!(p > 0.0) || !(1.0 - p * m > p)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "randomized response requires 0 < p and 1 - p*m > p; got p = ", p,
        " with m = ", space.size() - 1));
  }
  return FiniteKernel::Create(space, RandomizedResponseMatrix(space.size(), p));
}

absl::StatusOr<double> RandomizedResponseMinP(std::size_t m,
                                              const PrivacyParams& params) {
  if (m < 1) return absl::InvalidArgumentError("m must be >= 1");
  return (1.0 - params.delta()) /
         (static_cast<double>(m) + std::exp(params.epsilon()));
}

absl::StatusOr<FiniteKernel> CalibratedRandomizedResponse(
    const FiniteMetricSpace& space, const PrivacyParams& params) {
  if (space.size() < 2) {
    return absl::InvalidArgumentError(
        "randomized response needs at least 2 points");
  }
  auto p = RandomizedResponseMinP(space.size() - 1, params);
  if (!p.ok()) return p.status();
  if (!(*p > 0.0)) {
    return absl::InvalidArgumentError(
        "delta = 1 gives p = 0; calibration is meaningless");
  }
  return FiniteKernel::Create(space, RandomizedResponseMatrix(space.size(), *p));
}

absl::StatusOr<double> LaplaceScale(double diam, const PrivacyParams& params) {
  if (!(diam > 0.0) || std::isinf(diam)) {
    return absl::InvalidArgumentError(
        absl::StrCat("diameter must be finite and > 0, got ", diam));
  }
  if (params.delta() == 1.0) {
    return absl::InvalidArgumentError(
        "delta = 1: every mechanism is private, calibration is meaningless");
  }
  if (params.epsilon() == 0.0 && params.delta() == 0.0) {
    return absl::InvalidArgumentError(
        "epsilon = delta = 0 admits no finite Laplace scale");
  }
  return diam / (params.epsilon() - std::log1p(-params.delta()));
}

absl::StatusOr<double> LaplaceEventProb(double center, double b,
                                        const Interval& interval) {
  if (!(b > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be > 0, got ", b));
  }
  const double lo = interval.lo;
  const double hi = interval.hi;
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid interval [", lo, ", ", hi, "]"));
  }
  if (lo == hi) return 0.0;
  if (hi <= center) {
    return 0.5 * std::exp((hi - center) / b) * -std::expm1((lo - hi) / b);
  }
  if (lo >= center) {
    return 0.5 * std::exp(-(lo - center) / b) * -std::expm1(-(hi - lo) / b);
  }
  return 1.0 - 0.5 * std::exp((lo - center) / b) -
         0.5 * std::exp(-(hi - center) / b);
}

absl::StatusOr<LaplaceMechanism> LaplaceMechanism::Create(
    double lo, double hi, const PrivacyParams& params) {
  if (!(lo < hi) || std::isinf(lo) || std::isinf(hi)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Laplace data interval must satisfy finite lo < hi, got [", lo, ", ",
        hi, "]"));
  }
  auto b = LaplaceScale(hi - lo, params);
  if (!b.ok()) return b.status();
  return LaplaceMechanism(lo, hi, *b);
}

absl::StatusOr<LaplaceMechanism> LaplaceMechanism::WithScale(double lo,
                                                             double hi,
                                                             double b) {
  if (!(lo < hi) || std::isinf(lo) || std::isinf(hi)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Laplace data interval must satisfy finite lo < hi, got [", lo, ", ",
        hi, "]"));
  }
  if (!(b > 0.0) || std::isinf(b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be finite and > 0, got ", b));
  }
  return LaplaceMechanism(lo, hi, b);
}

double LaplaceMechanism::Density(double center, double x) const {
  return std::exp(-std::abs(x - center) / b_) / (2.0 * b_);
}

absl::StatusOr<double> LaplaceMechanism::EventProb(
    double center, const Interval& interval) const {
  return LaplaceEventProb(center, b_, interval);
}

absl::StatusOr<std::vector<double>> LaplaceMechanism::Sample(
    std::span<const double> values, std::uint64_t seed) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= lo_ && values[i] <= hi_)) {
      return absl::OutOfRangeError(absl::StrCat(
          "row ", i, " value ", values[i], " outside [", lo_, ", ", hi_, "]"));
    }
    Stream stream(seed, i);
    out.push_back(values[i] + stream.NextLaplace(b_));
  }
  return out;
}

absl::StatusOr<ProductMechanism> ProductMechanism::Create(FiniteKernel base,
                                                          std::size_t n) {
  if (n < 1) {
    return absl::InvalidArgumentError("product mechanism needs n >= 1 rows");
  }
  return ProductMechanism(std::move(base), n);
}

absl::StatusOr<ProductMechanism> ProductKernel(FiniteKernel base,
                                               std::size_t n) {
  return ProductMechanism::Create(std::move(base), n);
}

double ProductMechanism::OutcomeProb(const Database& db,
                                     std::span<const std::size_t> u) const {
  double p = 1.0;
  for (std::size_t i = 0; i < n_; ++i) p *= base_.prob(db[i], u[i]);
  return p;
}

std::vector<double> ProductMechanism::LawUnchecked(
    std::span<const std::size_t> rows) const {
  // Built row by row: law_{i+1}(u, y) = law_i(u) * probs[d_i][y].
  const std::size_t k = base_.output_size();
  std::vector<double> law{1.0};
  for (std::size_t i = 0; i < n_; ++i) {
    std::vector<double> next(law.size() * k);
    auto row = base_.row(rows[i]);
    for (std::size_t u = 0; u < law.size(); ++u) {
      for (std::size_t y = 0; y < k; ++y) next[u * k + y] = law[u] * row[y];
    }
    law = std::move(next);
  }
  return law;
}

absl::StatusOr<std::vector<double>> ProductMechanism::Law(
    const Database& db) const {
  if (db.n() != n_ || db.space_size() != base_.input_size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "database (n = ", db.n(), ", |space| = ", db.space_size(),
        ") does not match mechanism (n = ", n_, ", |D| = ", base_.input_size(),
        ")"));
  }
  auto total = CheckedPower(base_.output_size(), n_, kMaxEnumeratedOutcomes);
  if (!total.ok()) return total.status();
  return LawUnchecked(db.rows());
}

absl::StatusOr<Database> Sample(const ProductMechanism& mech,
                                const Database& db, std::uint64_t seed) {
  if (db.n() != mech.n() || db.space_size() != mech.base().input_size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "database (n = ", db.n(), ", |space| = ", db.space_size(),
        ") does not match mechanism (n = ", mech.n(),
        ", |D| = ", mech.base().input_size(), ")"));
  }
  std::vector<std::size_t> out(db.n());
  for (std::size_t i = 0; i < db.n(); ++i) {
    Stream stream(seed, i);
    out[i] = DrawFromRow(mech.base().row(db[i]), stream.NextUniform());
  }
  return Database::Create(mech.base().output_space(), std::move(out));
}

std::vector<double> PushforwardUnchecked(const ProductMechanism& mech,
                                         std::span<const std::size_t> rows,
                                         const FiniteQuery& query) {
  const std::vector<double> law = mech.LawUnchecked(rows);
  std::vector<double> out(query.response_count(), 0.0);
  std::vector<std::size_t> tuple(mech.n());
  const std::size_t radix = mech.base().output_size();
  for (std::uint64_t code = 0; code < law.size(); ++code) {
    if (law[code] == 0.0) continue;
    DecodeTuple(code, radix, tuple);
    out[query.Evaluate(tuple)] += law[code];
  }
  return out;
}

namespace {

absl::Status CheckQueryMatches(const ProductMechanism& mech,
                               const FiniteQuery& query) {
  if (query.domain_size() != mech.base().output_size() ||
      query.arity() != mech.n()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "query '", query.name(), "' is defined on tuples of length ",
        query.arity(), " over ", query.domain_size(),
        " points; the mechanism outputs tuples of length ", mech.n(), " over ",
        mech.base().output_size(), " points"));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Distribution> Pushforward(const ProductMechanism& mech,
                                         const Database& db,
                                         const FiniteQuery& query) {
  if (auto s = CheckQueryMatches(mech, query); !s.ok()) return s;
  if (db.n() != mech.n() || db.space_size() != mech.base().input_size()) {
    return absl::InvalidArgumentError(
        "database does not match the mechanism's input space or length");
  }
  auto total = CheckedPower(mech.base().output_size(), mech.n(),
                            kMaxEnumeratedOutcomes);
  if (!total.ok()) {
    return absl::ResourceExhaustedError(absl::StrCat(
        total.status().message(),
        "; use the Monte Carlo estimate (PushforwardMonteCarlo) instead"));
  }
  if (query.response_count() > kMaxEnumeratedOutcomes) {
    return absl::ResourceExhaustedError(
        "query response set too large for an exact law; use Monte Carlo");
  }
  std::vector<double> dense = PushforwardUnchecked(mech, db.rows(), query);
  Distribution out;
  out.support.reserve(dense.size());
  for (std::size_t r = 0; r < dense.size(); ++r) {
    out.support.push_back(query.ResponseLabel(r));
  }
  out.probs = std::move(dense);
  return out;
}

absl::StatusOr<MonteCarloEstimate> PushforwardMonteCarlo(
    const ProductMechanism& mech, const Database& db, const FiniteQuery& query,
    std::uint64_t draws, std::uint64_t seed) {
  if (auto s = CheckQueryMatches(mech, query); !s.ok()) return s;
  if (draws == 0) return absl::InvalidArgumentError("draws must be >= 1");
  std::map<std::size_t, std::uint64_t> counts;
  for (std::uint64_t t = 0; t < draws; ++t) {
    auto sanitised = Sample(mech, db, StreamSeed(seed, t));
    if (!sanitised.ok()) return sanitised.status();
    ++counts[query.Evaluate(sanitised->rows())];
  }
  MonteCarloEstimate out;
  out.draws = draws;
  const double total = static_cast<double>(draws);
  for (const auto& [response, count] : counts) {
    const double p = static_cast<double>(count) / total;
    out.support.push_back(query.ResponseLabel(response));
    out.probs.push_back(p);
    out.std_errors.push_back(std::sqrt(p * (1.0 - p) / total));
  }
  return out;
}

absl::StatusOr<OutputPerturbation> OutputPerturbation::Create(
    FiniteQuery query, FiniteKernel response_kernel) {
  if (query.response_count() > kMaxEnumeratedOutcomes) {
    return absl::ResourceExhaustedError(
        "query response set too large for output perturbation");
  }
  std::vector<std::size_t> rows(query.response_count());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string label = query.ResponseLabel(r);
    auto idx = response_kernel.input_space().IndexOf(label);
    if (!idx) {
      return absl::InvalidArgumentError(absl::StrCat(
          "query response '", label,
          "' is not a point of the response kernel's input space"));
    }
    rows[r] = *idx;
  }
  return OutputPerturbation(std::move(query), std::move(response_kernel),
                            std::move(rows));
}

std::span<const double> OutputPerturbation::LawUnchecked(
    std::span<const std::size_t> rows) const {
  return kernel_.row(response_to_row_[query_.Evaluate(rows)]);
}

absl::StatusOr<Distribution> OutputPerturbation::LawAt(
    const Database& db) const {
  if (db.n() != query_.arity() || db.space_size() != query_.domain_size()) {
    return absl::InvalidArgumentError(
        "database does not match the query's domain or arity");
  }
  auto row = LawUnchecked(db.rows());
  return Distribution{kernel_.output_space().labels(),
                      std::vector<double>(row.begin(), row.end())};
}

}  // namespace metricdp
