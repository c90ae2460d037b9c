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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "metricdp/accuracy.h"
#include "metricdp/cli.h"
#include "metricdp/functional.h"
#include "metricdp/mechanism.h"
#include "metricdp/metric_space.h"
#include "metricdp/query.h"
#include "metricdp/rng.h"
#include "metricdp/verifier.h"
#include "oracles.h"

namespace metricdp {
namespace {

constexpr double kLn2 = std::numbers::ln2;
const std::vector<std::size_t> kGridM = {1, 2, 3, 7};
const std::vector<double> kGridEps = {0.0, kLn2, 1.0, 2.0};
const std::vector<double> kGridDelta = {0.0, 0.1, 0.5};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure message; later ones only bump the count.
class Failures {
 public:
  void Add(const std::string& what) {
    if (count_++ == 0) first_ = what;
  }
  bool empty() const { return count_ == 0; }
  std::string Summary() const {
    return absl::StrCat(count_, " failure(s), first: ", first_);
  }

 private:
  std::size_t count_ = 0;
  std::string first_;
};

template <typename T>
T Must(absl::StatusOr<T> v) {
  if (!v.ok()) {
    std::fprintf(stderr, "unexpected error: %s\n", v.status().ToString().c_str());
    std::exit(2);
  }
  return *std::move(v);
}

PrivacyParams Params(double eps, double delta) {
  return Must(PrivacyParams::Create(eps, delta));
}

FiniteMetricSpace DiscreteOfSize(std::size_t size) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) labels.push_back(absl::StrCat("v", i));
  return Must(DiscreteMetricSpace(labels));
}

std::string Where(double eps, double delta, std::size_t m) {
  return absl::StrFormat("m=%d eps=%.6g delta=%.6g", m, eps, delta);
}

Outcome RandomizedResponseBoundary() {
  Failures f;
  int configs = 0;
  for (std::size_t m : kGridM) {
    const auto space = DiscreteOfSize(m + 1);
    for (double eps : kGridEps) {
      for (double delta : kGridDelta) {
        ++configs;
        const auto params = Params(eps, delta);
        const std::string where = Where(eps, delta, m);
        const auto kernel = Must(CalibratedRandomizedResponse(space, params));
        if (!Must(CheckDp1dExhaustive(kernel, params)).passed) {
          f.Add(absl::StrCat(where, ": calibrated kernel fails verification"));
        }
        const double slack = Must(DeltaSlackClosedForm(kernel, eps));
        if (std::abs(slack - delta) > 1e-9) {
          f.Add(absl::StrCat(where, ": slack ", slack, " != delta"));
        }
        const double p = Must(RandomizedResponseMinP(m, params)) - 1e-6;
        auto reduced = RandomizedResponseKernel(space, p);
        if (!reduced.ok()) continue;  // infeasible
        const double reduced_slack = Must(DeltaSlackClosedForm(*reduced, eps));
        if (!(reduced_slack > delta + 1e-9)) {
          f.Add(absl::StrCat(where, ": reduced p slack ", reduced_slack,
                             " does not exceed delta"));
        }
        if (Must(CheckDp1dExhaustive(*reduced, params)).passed) {
          f.Add(absl::StrCat(where, ": reduced p kernel still passes"));
        }
      }
    }
  }
  if (!f.empty()) return {false, f.Summary()};
  return {true, absl::StrCat(configs, " grid points")};
}

// Criterion-2 corpus: random kernels on random line metrics.
struct CorpusEntry {
  FiniteKernel kernel;
  FiniteMetricSpace space;
};

std::vector<CorpusEntry> BuildCorpus() {
  std::mt19937_64 rng(20260101);
  std::vector<CorpusEntry> out;
  for (int i = 0; i < 200; ++i) {
    const std::size_t size = 2 + i % 2;
    auto space = testing::RandomLineSpace(size, rng);
    auto kernel = Must(FiniteKernel::Create(
        space, testing::RandomStochastic(size, size, rng)));
    out.push_back({std::move(kernel), std::move(space)});
  }
  return out;
}

// Every (eps, delta) on the grid plus the exact boundary delta per eps.
std::vector<std::pair<double, double>> ParamsFor(const FiniteKernel& kernel) {
  std::vector<std::pair<double, double>> out;
  for (double eps : kGridEps) {
    for (double delta : kGridDelta) out.push_back({eps, delta});
    out.push_back({eps, Must(DeltaSlackClosedForm(kernel, eps))});
  }
  return out;
}

struct PassingMechanism {
  std::size_t corpus_index;
  double eps;
  double delta;
};

Outcome ProductEquivalence(const std::vector<CorpusEntry>& corpus,
                           std::vector<PassingMechanism>& passing) {
  Failures f;
  std::size_t checks = 0, passed = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& kernel = corpus[i].kernel;
    const auto mech = Must(ProductKernel(kernel, 2));
    for (auto [eps, delta] : ParamsFor(kernel)) {
      ++checks;
      const auto params = Params(eps, delta);
      const bool one_row = Must(CheckDp1dExhaustive(kernel, params)).passed;
      const bool product = Must(CheckDpProductBruteforce(mech, params)).passed;
      if (one_row != product) {
        f.Add(absl::StrFormat("kernel %d eps=%.17g delta=%.17g: one-row %d, product %d",
                              i, eps, delta, one_row, product));
      }
      if (product) {
        ++passed;
        passing.push_back({i, eps, delta});
      }
    }
  }
  if (!f.empty()) return {false, f.Summary()};
  return {true, absl::StrCat(checks, " verdict pairs agree (", passed, " private, ",
                             checks - passed, " not)")};
}

Outcome ClosedFormOracle() {
  std::mt19937_64 rng(77);
  Failures f;
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 2 + rng() % 5, u = 2 + rng() % 5;
    const auto kernel = Must(FiniteKernel::Create(
        DiscreteOfSize(d), DiscreteOfSize(u), testing::RandomStochastic(d, u, rng)));
    const double eps = kGridEps[rng() % kGridEps.size()] * (0.5 + (rng() % 100) / 100.0);
    const double closed = Must(DeltaSlackClosedForm(kernel, eps));
    const double exhaustive = Must(CheckDp1dExhaustive(kernel, Params(eps, 0))).max_violation;
    const double gap = std::abs(closed - std::clamp(exhaustive, 0.0, 1.0));
    worst = std::max(worst, gap);
    if (gap > 1e-12) f.Add(absl::StrCat("kernel ", i, ": gap ", gap));
  }
  if (!f.empty()) return {false, f.Summary()};
  return {true, absl::StrFormat("500 kernels, max gap %.3g", worst)};
}

Outcome QueryPostProcessing(const std::vector<CorpusEntry>& corpus,
                            const std::vector<PassingMechanism>& passing) {
  Failures f;
  std::size_t checks = 0;
  for (const auto& pm : passing) {
    const auto& kernel = corpus[pm.corpus_index].kernel;
    const auto& space = kernel.output_space();
    const auto mech = Must(ProductKernel(kernel, 2));
    const auto params = Params(pm.eps, pm.delta);
    for (const auto& query :
         {Must(FiniteQuery::Identity(space, 2)), Must(FiniteQuery::Count(space, space.label(0), 2)),
          Must(FiniteQuery::Mode(space, 2)), Must(FiniteQuery::Constant(space, 2))}) {
      ++checks;
      if (!Must(CheckQueryDp(mech, query, params)).passed) {
        f.Add(absl::StrFormat("kernel %d query %s eps=%.17g delta=%.17g fails",
                              pm.corpus_index, query.name(), pm.eps, pm.delta));
      }
    }
  }
  if (!f.empty()) return {false, f.Summary()};
  return {true, absl::StrCat(checks, " query checks, zero counterexamples")};
}

Outcome Tightness() {
  Failures f;
  for (std::size_t m : kGridM) {
    const auto space = DiscreteOfSize(m + 1);
    for (double eps : kGridEps) {
      for (double delta : kGridDelta) {
        const auto params = Params(eps, delta);
        const auto kernel = Must(CalibratedRandomizedResponse(space, params));
        const double error = Must(ExpectedError(kernel, space, params)).max_error;
        const double bound = Must(LowerBoundFinite(1.0, m, params)).value;
        if (std::abs(error - bound) > 1e-12) {
          f.Add(absl::StrCat(Where(eps, delta, m), ": error ", error, " bound ", bound));
        }
      }
    }
  }
  const double example =
      Must(ExpectedError(Must(CalibratedRandomizedResponse(DiscreteOfSize(4), Params(kLn2, 0))),
                         DiscreteOfSize(4), Params(kLn2, 0)))
          .max_error;
  if (std::abs(example - 0.6) > 1e-12) f.Add(absl::StrCat("m=3 ln2 example gives ", example));
  if (!f.empty()) return {false, f.Summary()};
  return {true, "48 grid points within 1e-12; m=3, eps=ln 2 gives 0.6"};
}

Outcome BoundSoundness(const std::vector<CorpusEntry>& corpus) {
  Failures f;
  std::size_t checks = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& [kernel, space] = corpus[i];
    for (double eps : kGridEps) {
      const double delta = Must(DeltaSlackClosedForm(kernel, eps));
      if (delta >= 1.0) continue;
      const auto params = Params(eps, delta);
      if (!Must(CheckDp1dExhaustive(kernel, params)).passed) {
        f.Add(absl::StrCat("kernel ", i, " fails at its own slack"));
        continue;
      }
      ++checks;
      const auto report = Must(ExpectedError(kernel, space, params));
      if (!(report.max_error > 0)) f.Add(absl::StrCat("kernel ", i, ": zero error"));
      if (report.max_error < report.bound_general - 1e-12) {
        f.Add(absl::StrCat("kernel ", i, ": error below general bound"));
      }
      if (report.max_error < report.bound_finite - 1e-12) {
        f.Add(absl::StrCat("kernel ", i, ": error below finite bound"));
      }
      min_margin = std::min(min_margin, report.max_error -
                                            std::max(report.bound_general, report.bound_finite));
    }
  }
  if (!f.empty()) return {false, f.Summary()};
  return {true, absl::StrFormat("%d (kernel, eps) cases, min margin %.3g", checks, min_margin)};
}

// 100 intervals over a window around the two centres, widths varying.
std::vector<Interval> Sweep(double diam) {
  std::vector<Interval> out;
  const double inf = std::numeric_limits<double>::infinity();
  out.push_back({-inf, 0});
  out.push_back({diam, inf});
  for (int i = 0; out.size() < 100; ++i) {
    const double lo = -4 * diam + 0.09 * diam * i;
    const double width = diam * (0.05 + 0.3 * (i % 7));
    out.push_back({lo, lo + width});
  }
  return out;
}

Outcome LaplaceCalibration() {
  Failures f;
  std::size_t violations_reduced = 0, configs = 0;
  bool every_config_violates = true;
  for (double diam : {1.0, 3.5}) {
    for (double eps : {0.25, 1.0, 2.0}) {
      ++configs;
      const double b = Must(LaplaceScale(diam, Params(eps, 0)));
      const double bound = std::exp(eps) + 1e-9;
      std::size_t here = 0;
      for (const auto& a : Sweep(diam)) {
        const double p = Must(LaplaceEventProb(0, b, a));
        const double q = Must(LaplaceEventProb(diam, b, a));
        if (p > bound * q || q > bound * p) {
          f.Add(absl::StrFormat("diam=%g eps=%g interval [%g,%g] ratio exceeds e^eps", diam,
                                eps, a.lo, a.hi));
        }
        const double pr = Must(LaplaceEventProb(0, 0.9 * b, a));
        const double qr = Must(LaplaceEventProb(diam, 0.9 * b, a));
        if (pr > bound * qr || qr > bound * pr) ++here;
      }
      violations_reduced += here;
      every_config_violates &= here > 0;
    }
  }
  if (!every_config_violates) f.Add("reduced scale produced no violating interval");
  if (!f.empty()) return {false, f.Summary()};
  return {true, absl::StrCat(configs, " configs x 100 intervals; reduced b violates in ",
                             violations_reduced, " intervals")};
}

Outcome RectangleDecompositionCheck() {
  std::mt19937_64 rng(5150);
  Failures f;
  for (int trial = 0; trial < 1000; ++trial) {
    const int ground = 1 + rng() % 8;
    std::vector<Rectangle> rects(1 + rng() % 5);
    for (auto& r : rects) {
      while (r.a.empty()) {
        for (int x = 0; x < ground; ++x) {
          if (rng() % 2) r.a.insert(absl::StrCat("a", x));
        }
      }
      while (r.b.empty()) {
        for (int x = 0; x < ground; ++x) {
          if (rng() % 2) r.b.insert(absl::StrCat("b", x));
        }
      }
    }
    const auto dec = Must(DecomposeRectangles(rects));
    std::set<std::pair<std::string, std::string>> lhs, rhs;
    for (const auto& r : rects) {
      for (const auto& a : r.a) {
        for (const auto& b : r.b) lhs.insert({a, b});
      }
    }
    std::set<std::string> seen;
    for (const auto& part : dec.parts) {
      for (const auto& b : part.rect.b) {
        if (!seen.insert(b).second) f.Add(absl::StrCat("trial ", trial, ": B parts overlap"));
        for (std::size_t i = 0; i < rects.size(); ++i) {
          const bool in_index = std::find(part.indices.begin(), part.indices.end(), i) !=
                                part.indices.end();
          if (rects[i].b.contains(b) != in_index) {
            f.Add(absl::StrCat("trial ", trial, ": membership of ", b, " mismatches I"));
          }
        }
      }
      for (const auto& a : part.rect.a) {
        for (const auto& b : part.rect.b) rhs.insert({a, b});
      }
    }
    if (lhs != rhs) f.Add(absl::StrCat("trial ", trial, ": union differs"));
  }
  if (!f.empty()) return {false, f.Summary()};
  return {true, "1000 families, unions equal, second factors disjoint"};
}

Outcome Functional() {
  Failures f;
  for (double width : {0.5, 1.0, 7.0}) {
    for (double eps : kGridEps) {
      for (double delta : kGridDelta) {
        if (eps == 0 && delta == 0) continue;
        const auto params = Params(eps, delta);
        const auto space = Must(GridFunctionSpace::Create({0.5}, 1.0, 1.0 + width));
        if (Must(FunctionalLaplaceScale(space, params)) != Must(LaplaceScale(width, params))) {
          f.Add(absl::StrCat("k=1 scale mismatch at width ", width));
        }
      }
    }
  }
  std::size_t subsets = 0;
  for (std::size_t k = 1; k <= 6; ++k) {
    std::vector<double> grid;
    for (std::size_t j = 0; j < k; ++j) grid.push_back(j / 6.0);
    const auto space = Must(GridFunctionSpace::Create(grid, -1, 2));
    for (double eps : {0.5, 1.0, 2.0}) {
      for (double delta : kGridDelta) {
        const auto params = Params(eps, delta);
        const double b = Must(FunctionalLaplaceScale(space, params));
        std::vector<std::size_t> all(k);
        for (std::size_t j = 0; j < k; ++j) all[j] = j;
        if (!Must(CertifyProjectionDp(space, b, params, all)).certified) {
          f.Add(absl::StrCat("k=", k, ": full grid not certified"));
          continue;
        }
        for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
          std::vector<std::size_t> idx;
          for (std::size_t j = 0; j < k; ++j) {
            if (mask >> j & 1) idx.push_back(j);
          }
          ++subsets;
          if (!Must(CertifyProjectionDp(space, b, params, idx)).certified) {
            f.Add(absl::StrCat("k=", k, " mask=", mask, ": subset not certified"));
          }
        }
      }
    }
  }
  const auto space = Must(GridFunctionSpace::Create({0.0, 0.5, 1.0}, 0, 1));
  const auto zero = Must(GridFunction::Clipped(space, {0, 0, 0}));
  const double b = 1.5;
  const int draws = 100000;
  std::vector<double> abs_sum(3, 0.0);
  for (int t = 0; t < draws; ++t) {
    const auto out = Must(SanitizeFunction(zero, b, t));
    for (std::size_t j = 0; j < 3; ++j) abs_sum[j] += std::abs(out[j]);
  }
  // |N| for N ~ Laplace(b) has mean b and standard deviation b.
  const double band = 3 * b / std::sqrt(static_cast<double>(draws));
  std::string means;
  for (std::size_t j = 0; j < 3; ++j) {
    const double mean = abs_sum[j] / draws;
    absl::StrAppendFormat(&means, " %.4f", mean);
    if (std::abs(mean - b) > band) {
      f.Add(absl::StrFormat("coordinate %d mean |noise| %.5f outside %.5f +- %.5f", j, mean,
                            b, band));
    }
  }
  if (!f.empty()) return {false, f.Summary()};
  return {true, absl::StrCat("k=1 scales exact; ", subsets, " subsets certified; mean |noise|",
                             means, " vs b=1.5")};
}

Outcome CliGolden() {
  const std::filesystem::path dir = METRICDP_GOLDEN_DIR;
  const std::string ln2 = "0.6931471805599453";
  struct Case {
    std::vector<std::string> args;
    std::string expected;
    int code;
  };
  const std::vector<Case> cases = {
      {{"calibrate", "rr", "--m", "3", "--epsilon", ln2, "--delta", "0"},
       "calibrate_rr_m3.expected.json", kExitOk},
      {{"verify", "--kernel", (dir / "rr_p03.json").string(), "--epsilon", ln2, "--delta",
        "0", "--mode", "exhaustive"},
       "verify_rr_p03.expected.json", kExitViolation},
      {{"error", "--kernel", (dir / "rr_p02.json").string(), "--space",
        (dir / "discrete4.json").string(), "--epsilon", ln2, "--delta", "0"},
       "error_rr_p02.expected.json", kExitOk},
  };
  Failures f;
  for (const auto& c : cases) {
    std::ostringstream out, err;
    const int code = RunCli(c.args, out, err);
    std::ifstream in(dir / c.expected, std::ios::binary);
    std::ostringstream expected;
    expected << in.rdbuf();
    if (code != c.code) f.Add(absl::StrCat(c.expected, ": exit ", code, " ", err.str()));
    if (out.str() != expected.str()) f.Add(absl::StrCat(c.expected, ": output differs"));
  }
  if (!f.empty()) return {false, f.Summary()};
  return {true, "3 fixtures byte-identical"};
}

struct Criterion {
  int number;
  std::string name;
  double time_limit_s;  // 0 = none
  std::function<Outcome()> run;
};

int Main() {
  const auto corpus = BuildCorpus();
  std::vector<PassingMechanism> passing;
  const std::vector<Criterion> criteria = {
      {1, "randomized-response boundary", 5.0, RandomizedResponseBoundary},
      {2, "one-row vs product verdicts", 60.0,
       [&] { return ProductEquivalence(corpus, passing); }},
      {3, "closed-form slack vs exhaustive", 0, ClosedFormOracle},
      {4, "queries preserve privacy", 0, [&] { return QueryPostProcessing(corpus, passing); }},
      {5, "randomized-response tightness", 0, Tightness},
      {6, "lower-bound soundness", 0, [&] { return BoundSoundness(corpus); }},
      {7, "Laplace calibration", 1.0, LaplaceCalibration},
      {8, "rectangle decomposition", 0, RectangleDecompositionCheck},
      {9, "functional projections and noise", 0, Functional},
      {10, "CLI golden files", 0, CliGolden},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += absl::StrFormat("; runtime %.2f s exceeds %.0f s", secs, c.time_limit_s);
    }
    failures += !o.pass;
    std::printf("%s criterion %d (%s): %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", c.number,
                c.name.c_str(), o.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace metricdp

int main() { return metricdp::Main(); }
