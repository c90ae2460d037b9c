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

#ifndef METRICDP_MECHANISM_H_
#define METRICDP_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "metricdp/metric_space.h"
#include "metricdp/query.h"

namespace metricdp {

// Row sums of a kernel must equal one within this tolerance.
inline constexpr double kStochasticTolerance = 1e-9;

// Largest |U|^n for which laws over U^n are enumerated exactly.
inline constexpr std::uint64_t kMaxEnumeratedOutcomes = 10'000'000;

// The pair (epsilon, delta) with epsilon >= 0 and 0 <= delta <= 1.
class PrivacyParams {
 public:
  static absl::StatusOr<PrivacyParams> Create(double epsilon, double delta);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }

 private:
  PrivacyParams(double epsilon, double delta)
      : epsilon_(epsilon), delta_(delta) {}

  double epsilon_;
  double delta_;
};

// A one-row mechanism: probs(d, y) = P(X_d = y) for d in the input space D
// and y in the output space U.
class FiniteKernel {
 public:
  static absl::StatusOr<FiniteKernel> Create(
      FiniteMetricSpace input_space, FiniteMetricSpace output_space,
      std::vector<std::vector<double>> probs);
  // Input and output spaces coincide (D = U).
  static absl::StatusOr<FiniteKernel> Create(
      FiniteMetricSpace space, std::vector<std::vector<double>> probs);

  const FiniteMetricSpace& input_space() const { return input_; }
  const FiniteMetricSpace& output_space() const { return output_; }
  std::size_t input_size() const { return input_.size(); }
  std::size_t output_size() const { return output_.size(); }

  double prob(std::size_t d, std::size_t y) const {
    return probs_[d * output_.size() + y];
  }
  std::span<const double> row(std::size_t d) const {
    return {probs_.data() + d * output_.size(), output_.size()};
  }
  std::vector<std::vector<double>> ProbabilityMatrix() const;

 private:
  FiniteKernel(FiniteMetricSpace input, FiniteMetricSpace output,
               std::vector<double> probs)
      : input_(std::move(input)),
        output_(std::move(output)),
        probs_(std::move(probs)) {}

  FiniteMetricSpace input_;
  FiniteMetricSpace output_;
  std::vector<double> probs_;
};

// Randomized response on |D| = m + 1 points: keep the true value with
// probability 1 - p*m and report each other value with probability p.
// Requires 0 < p and 1 - p*m > p.
absl::StatusOr<FiniteKernel> RandomizedResponseKernel(
    const FiniteMetricSpace& space, double p);

// Smallest p for which randomized response is (epsilon, delta)-private:
// p = (1 - delta) / (m + e^epsilon).
absl::StatusOr<double> RandomizedResponseMinP(std::size_t m,
                                              const PrivacyParams& params);

// Randomized response at RandomizedResponseMinP. Unlike
// RandomizedResponseKernel this admits 1 - p*m == p, the uniform kernel
// obtained at epsilon = delta = 0.
absl::StatusOr<FiniteKernel> CalibratedRandomizedResponse(
    const FiniteMetricSpace& space, const PrivacyParams& params);

// Laplace scale b = diam / (epsilon - log(1 - delta)) for additive noise on a
// bounded interval of the given diameter.
absl::StatusOr<double> LaplaceScale(double diam, const PrivacyParams& params);

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

// P(Laplace(center, b) in [lo, hi]), via the closed-form CDF.
absl::StatusOr<double> LaplaceEventProb(double center, double b,
                                        const Interval& interval);

// Additive Laplace noise on values in [lo, hi], calibrated to the interval's
// diameter. Handled analytically; no finite kernel is built for it.
class LaplaceMechanism {
 public:
  static absl::StatusOr<LaplaceMechanism> Create(double lo, double hi,
                                                 const PrivacyParams& params);
  static absl::StatusOr<LaplaceMechanism> WithScale(double lo, double hi,
                                                    double b);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double scale() const { return b_; }

  double Density(double center, double x) const;
  absl::StatusOr<double> EventProb(double center,
                                   const Interval& interval) const;
  // One noisy release of `value` per row, row i on stream i of `seed`.
  absl::StatusOr<std::vector<double>> Sample(std::span<const double> values,
                                             std::uint64_t seed) const;

 private:
  LaplaceMechanism(double lo, double hi, double b) : lo_(lo), hi_(hi), b_(b) {}

  double lo_;
  double hi_;
  double b_;
};

// n independent copies of a base kernel, one per database row.
class ProductMechanism {
 public:
  static absl::StatusOr<ProductMechanism> Create(FiniteKernel base,
                                                 std::size_t n);

  const FiniteKernel& base() const { return base_; }
  std::size_t n() const { return n_; }

  // P(X_db = u) for u encoded lexicographically (row 0 most significant).
  double OutcomeProb(const Database& db, std::span<const std::size_t> u) const;
  // Full law over U^n, indexed by EncodeTuple. Capacity-guarded.
  absl::StatusOr<std::vector<double>> Law(const Database& db) const;
  // Law at a database given directly as point indices.
  std::vector<double> LawUnchecked(std::span<const std::size_t> rows) const;

 private:
  ProductMechanism(FiniteKernel base, std::size_t n)
      : base_(std::move(base)), n_(n) {}

  FiniteKernel base_;
  std::size_t n_;
};

absl::StatusOr<ProductMechanism> ProductKernel(FiniteKernel base,
                                               std::size_t n);

// Sanitised database over the output space, row i drawn from stream i of
// `seed` by inversion of the kernel row.
absl::StatusOr<Database> Sample(const ProductMechanism& mech,
                                const Database& db, std::uint64_t seed);

// A law over a labelled finite response set.
struct Distribution {
  std::vector<std::string> support;
  std::vector<double> probs;
};

// Exact law of Q(X_db), summing product probabilities over each fibre.
absl::StatusOr<Distribution> Pushforward(const ProductMechanism& mech,
                                         const Database& db,
                                         const FiniteQuery& query);

// Law of Q(X_db) as a dense vector over E_Q. No capacity check on |E_Q|.
std::vector<double> PushforwardUnchecked(const ProductMechanism& mech,
                                         std::span<const std::size_t> rows,
                                         const FiniteQuery& query);

// Monte Carlo estimate of the pushforward for spaces too large to enumerate.
// Only observed responses are listed, in increasing response order.
struct MonteCarloEstimate {
  std::vector<std::string> support;
  std::vector<double> probs;
  std::vector<double> std_errors;
  std::uint64_t draws = 0;
};

absl::StatusOr<MonteCarloEstimate> PushforwardMonteCarlo(
    const ProductMechanism& mech, const Database& db, const FiniteQuery& query,
    std::uint64_t draws, std::uint64_t seed);

// Output perturbation: the response at db is the response kernel's row at
// Q(db). The query is evaluated on the database itself, so its domain is the
// data space; the kernel's input labels must cover the query's responses.
class OutputPerturbation {
 public:
  static absl::StatusOr<OutputPerturbation> Create(FiniteQuery query,
                                                   FiniteKernel response_kernel);

  const FiniteQuery& query() const { return query_; }
  const FiniteKernel& response_kernel() const { return kernel_; }

  // Kernel input index used for query response r.
  std::size_t KernelRowFor(std::size_t response) const {
    return response_to_row_[response];
  }
  absl::StatusOr<Distribution> LawAt(const Database& db) const;
  std::span<const double> LawUnchecked(std::span<const std::size_t> rows) const;

 private:
  OutputPerturbation(FiniteQuery query, FiniteKernel kernel,
                     std::vector<std::size_t> response_to_row)
      : query_(std::move(query)),
        kernel_(std::move(kernel)),
        response_to_row_(std::move(response_to_row)) {}

  FiniteQuery query_;
  FiniteKernel kernel_;
  std::vector<std::size_t> response_to_row_;
};

}  // namespace metricdp

#endif  // METRICDP_MECHANISM_H_
