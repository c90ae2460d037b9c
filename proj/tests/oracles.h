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

// Independent reference computations for the tests. Nothing here calls into
// the verifier; event probabilities are summed point by point.

#ifndef METRICDP_TESTS_ORACLES_H_
#define METRICDP_TESTS_ORACLES_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "metricdp/mechanism.h"
#include "metricdp/metric_space.h"

namespace metricdp::testing {

// max over events A of P(A) - e^eps Q(A) - delta, by explicit enumeration.
inline double NaiveMaxViolation(const std::vector<double>& p,
                                const std::vector<double>& q, double epsilon,
                                double delta) {
  const double e = std::exp(epsilon);
  double best = -delta;  // empty event
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << p.size()); ++mask) {
    double pa = 0.0, qa = 0.0;
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (mask >> y & 1) {
        pa += p[y];
        qa += q[y];
      }
    }
    best = std::max(best, pa - e * qa - delta);
  }
  return best;
}

inline double NaiveKernelMaxViolation(const FiniteKernel& k, double epsilon,
                                      double delta) {
  double best = -delta;
  for (std::size_t d = 0; d < k.input_size(); ++d) {
    for (std::size_t e = 0; e < k.input_size(); ++e) {
      if (d == e) continue;
      auto p = k.row(d);
      auto q = k.row(e);
      best = std::max(best, NaiveMaxViolation({p.begin(), p.end()},
                                              {q.begin(), q.end()}, epsilon,
                                              delta));
    }
  }
  return best;
}

// Law of the n-fold product at rows, outcome u_0 ... u_{n-1} coded with u_0
// most significant.
inline std::vector<double> NaiveProductLaw(const FiniteKernel& k,
                                           const std::vector<std::size_t>& rows) {
  const std::size_t radix = k.output_size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) total *= radix;
  std::vector<double> law(total);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    double p = 1.0;
    for (std::size_t i = rows.size(); i-- > 0;) {
      p *= k.prob(rows[i], rest % radix);
      rest /= radix;
    }
    law[code] = p;
  }
  return law;
}

// Random row-stochastic matrix mixing the uniform row with a random one, so
// that privacy levels vary from near-0 to large.
inline std::vector<std::vector<double>> RandomStochastic(std::size_t rows,
                                                         std::size_t cols,
                                                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mix = unit(rng);
  std::vector<std::vector<double>> out(rows, std::vector<double>(cols));
  for (auto& row : out) {
    double sum = 0.0;
    for (double& v : row) {
      v = -std::log(unit(rng) + 1e-300);
      sum += v;
    }
    double total = 0.0;
    for (std::size_t y = 0; y < cols; ++y) {
      row[y] = (1.0 - mix) / cols + mix * row[y] / sum;
      total += row[y];
    }
    for (double& v : row) v /= total;
  }
  return out;
}

// Points at distinct random positions on a line: a valid metric.
inline FiniteMetricSpace RandomLineSpace(std::size_t size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> pos(size);
  double x = 0.0;
  for (double& p : pos) {
    x += 0.1 + unit(rng);
    p = x;
  }
  std::vector<std::string> labels;
  std::vector<std::vector<double>> dist(size, std::vector<double>(size));
  for (std::size_t i = 0; i < size; ++i) {
    labels.push_back(std::string(1, static_cast<char>('a' + i)));
    for (std::size_t j = 0; j < size; ++j) dist[i][j] = std::abs(pos[i] - pos[j]);
  }
  return *FiniteMetricSpace::Create(labels, dist);
}

}  // namespace metricdp::testing

#endif  // METRICDP_TESTS_ORACLES_H_
