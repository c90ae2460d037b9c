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

#include "metricdp/cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "metricdp/accuracy.h"
#include "metricdp/functional.h"
#include "metricdp/io.h"
#include "metricdp/mechanism.h"
#include "metricdp/rng.h"
#include "metricdp/verifier.h"

namespace metricdp {
namespace {

enum class Format { kJson, kText };

// Parsed flags shared by every subcommand. Unset optionals are flags the
// user did not pass.
struct CliConfig {
  std::string subcommand;
  std::string calibrate_target;
  std::string kernel_path;
  std::string space_path;
  std::string db_path;
  std::string query_path;
  std::string functional_path;
  std::string rects_path;
  std::string mode = "exhaustive";
  std::string indices;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> diam;
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> b;
  std::optional<std::size_t> m;
  std::optional<std::size_t> k;
  std::size_t n = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t mc_draws = 0;
  double tolerance = kDefaultViolationTolerance;
  unsigned threads = 1;
  bool tightness = false;
  Format format = Format::kJson;
};

// A failure that maps to exit code 2.
struct UsageError {
  std::string message;
};

struct Outcome {
  int code = kExitOk;
  Json report;
  std::string text;
};

template <typename T>
T Unwrap(absl::StatusOr<T> v) {
  if (!v.ok()) throw UsageError{std::string(v.status().message())};
  return std::move(*v);
}

double Need(const std::optional<double>& v, std::string_view flag) {
  if (!v) throw UsageError{absl::StrCat("--", std::string(flag), " is required")};
  return *v;
}

const std::string& Need(const std::string& v, std::string_view flag) {
  if (v.empty()) throw UsageError{absl::StrCat("--", std::string(flag), " is required")};
  return v;
}

PrivacyParams Params(const CliConfig& c) {
  return Unwrap(PrivacyParams::Create(Need(c.epsilon, "epsilon"),
                                      Need(c.delta, "delta")));
}

std::string Num(double v) { return absl::StrFormat("%.6g", v); }

std::uint64_t ResolveSeed(const CliConfig& c) {
  if (c.seed) return *c.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<std::size_t> ParseIndices(const std::string& text, std::size_t k) {
  std::vector<std::size_t> out;
  if (text.empty()) {
    for (std::size_t j = 0; j < k; ++j) out.push_back(j);
    return out;
  }
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    std::size_t v = 0;
    if (!absl::SimpleAtoi(part, &v)) {
      throw UsageError{absl::StrCat("--indices: '", part, "' is not an index")};
    }
    out.push_back(v);
  }
  return out;
}

Outcome CalibrateCommand(const CliConfig& c) {
  const PrivacyParams params = Params(c);
  Outcome o;
  o.report["mechanism"] = c.calibrate_target;
  if (c.calibrate_target == "rr") {
    std::size_t m = 0;
    if (c.m) {
      m = *c.m;
    } else if (!c.space_path.empty()) {
      m = Unwrap(LoadSpace(c.space_path)).size() - 1;
    } else {
      throw UsageError{"calibrate rr needs --m or --space"};
    }
    const double p = Unwrap(RandomizedResponseMinP(m, params));
    o.report["m"] = m;
    o.report["epsilon"] = params.epsilon();
    o.report["delta"] = params.delta();
    o.report["p"] = p;
    o.text = absl::StrCat("p = ", Num(p), "\n");
    return o;
  }
  if (c.calibrate_target == "laplace") {
    double diam = 0.0;
    if (c.diam) {
      diam = *c.diam;
    } else {
      diam = Need(c.hi, "hi") - Need(c.lo, "lo");
    }
    const double b = Unwrap(LaplaceScale(diam, params));
    o.report["diam"] = diam;
    o.report["epsilon"] = params.epsilon();
    o.report["delta"] = params.delta();
    o.report["b"] = b;
    o.text = absl::StrCat("b = ", Num(b), "\n");
    return o;
  }
  // functional
  const double lo = Need(c.lo, "lo");
  const double hi = Need(c.hi, "hi");
  std::vector<double> grid;
  if (!c.functional_path.empty()) {
    grid = Unwrap(LoadFunctionalCsv(c.functional_path, lo, hi)).space.grid();
  } else if (c.k) {
    for (std::size_t j = 0; j < *c.k; ++j) {
      grid.push_back(*c.k == 1 ? 0.0 : static_cast<double>(j) / (*c.k - 1));
    }
  } else {
    throw UsageError{"calibrate functional needs --k or --functional"};
  }
  const auto space = Unwrap(GridFunctionSpace::Create(grid, lo, hi));
  const double b = Unwrap(FunctionalLaplaceScale(space, params));
  o.report["k"] = space.k();
  o.report["lo"] = lo;
  o.report["hi"] = hi;
  o.report["epsilon"] = params.epsilon();
  o.report["delta"] = params.delta();
  o.report["b"] = b;
  o.text = absl::StrCat("b = ", Num(b), "\n");
  return o;
}

std::string ReportText(const VerificationReport& r) {
  std::string text = absl::StrCat(r.passed ? "PASSED" : "FAILED",
                                  "  max_violation = ", Num(r.max_violation),
                                  "  pairs = ", r.pairs_checked,
                                  "  events/pair = ", r.events_checked, "\n");
  if (r.witness) {
    absl::StrAppend(&text, "witness: d = ", r.witness->d,
                    ", d' = ", r.witness->d_prime, ", A = {",
                    absl::StrJoin(r.witness->event, ", "), "}, ",
                    Num(r.witness->lhs), " > ", Num(r.witness->rhs), "\n");
  }
  return text;
}

Outcome VerifyCommand(const CliConfig& c) {
  const PrivacyParams params = Params(c);
  const FiniteKernel kernel = Unwrap(LoadKernel(Need(c.kernel_path, "kernel")));
  VerifyOptions options{c.tolerance, c.threads};
  VerificationReport report;
  if (c.mode == "exhaustive") {
    report = Unwrap(CheckDp1dExhaustive(kernel, params, options));
  } else if (c.mode == "product") {
    const auto mech = Unwrap(ProductKernel(kernel, c.n));
    report = Unwrap(CheckDpProductBruteforce(mech, params, options));
  } else {
    const auto mech = Unwrap(ProductKernel(kernel, c.n));
    const Json doc = Unwrap(LoadJsonFile(Need(c.query_path, "query")));
    const auto query = Unwrap(QueryFromJson(doc, kernel.output_space(), c.n));
    report = Unwrap(CheckQueryDp(mech, query, params, options));
  }
  Outcome o;
  o.code = report.passed ? kExitOk : kExitViolation;
  o.report = ToJson(report);
  o.text = ReportText(report);
  return o;
}

Outcome SlackCommand(const CliConfig& c) {
  const double epsilon = Need(c.epsilon, "epsilon");
  const FiniteKernel kernel = Unwrap(LoadKernel(Need(c.kernel_path, "kernel")));
  const double slack = Unwrap(DeltaSlackClosedForm(kernel, epsilon));
  Outcome o;
  o.report["epsilon"] = epsilon;
  o.report["delta_slack"] = slack;
  o.text = absl::StrCat("delta_slack = ", Num(slack), "\n");
  if (c.delta) {
    const PrivacyParams params = Params(c);
    const bool satisfied = slack <= params.delta() + c.tolerance;
    o.report["delta"] = params.delta();
    o.report["satisfied"] = satisfied;
    o.code = satisfied ? kExitOk : kExitViolation;
    absl::StrAppend(&o.text, satisfied ? "within" : "exceeds", " target delta ",
                    Num(params.delta()), "\n");
  }
  return o;
}

Outcome ErrorCommand(const CliConfig& c) {
  const PrivacyParams params = Params(c);
  const FiniteMetricSpace metric =
      Unwrap(LoadSpace(Need(c.space_path, "space")));
  Outcome o;
  if (c.tightness) {
    const TightnessReport r = Unwrap(CheckTightness(metric, params));
    o.report = ToJson(r);
    o.code = r.tight && r.dp_passed ? kExitOk : kExitViolation;
    o.text = absl::StrCat("p = ", Num(r.p), "  max_error = ", Num(r.max_error),
                          "  bound_finite = ", Num(r.bound_finite),
                          "  tight = ", r.tight ? "yes" : "no",
                          "  dp = ", r.dp_passed ? "passed" : "failed", "\n");
    return o;
  }
  const FiniteKernel kernel = Unwrap(LoadKernel(Need(c.kernel_path, "kernel")));
  const ErrorReport r = Unwrap(ExpectedError(kernel, metric, params));
  o.report = ToJson(r);
  for (const auto& p : r.per_point) {
    absl::StrAppend(&o.text, p.point, "\t", Num(p.expected_error), "\n");
  }
  absl::StrAppend(&o.text, "max_error = ", Num(r.max_error),
                  "\nbound_general = ", Num(r.bound_general),
                  "\nbound_finite = ", Num(r.bound_finite),
                  "\ntight = ", r.tight ? "yes" : "no",
                  r.vacuous ? "\n(bounds vacuous at delta = 1)" : "", "\n");
  return o;
}

Outcome SanitizeCommand(const CliConfig& c) {
  const std::uint64_t seed = ResolveSeed(c);
  Outcome o;
  o.report["seed"] = seed;
  if (!c.functional_path.empty()) {
    const auto data = Unwrap(LoadFunctionalCsv(c.functional_path, Need(c.lo, "lo"),
                                               Need(c.hi, "hi")));
    const double b =
        c.b ? *c.b : Unwrap(FunctionalLaplaceScale(data.space, Params(c)));
    o.report["b"] = b;
    o.report["grid"] = data.space.grid();
    Json records = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    for (std::size_t j = 0; j < data.space.k(); ++j) {
      csv << (j ? "," : "") << data.space.grid()[j];
    }
    csv << '\n';
    for (std::size_t r = 0; r < data.records.size(); ++r) {
      const auto noisy =
          Unwrap(SanitizeFunction(data.records[r], b, StreamSeed(seed, r)));
      records.push_back(noisy);
      for (std::size_t j = 0; j < noisy.size(); ++j) {
        csv << (j ? "," : "") << noisy[j];
      }
      csv << '\n';
    }
    o.report["records"] = std::move(records);
    o.text = absl::StrCat("# seed ", seed, "\n", csv.str());
    return o;
  }
  const FiniteKernel kernel = Unwrap(LoadKernel(Need(c.kernel_path, "kernel")));
  const Database db =
      Unwrap(LoadDatabase(Need(c.db_path, "db"), kernel.input_space()));
  // Nothing is released unless the row kernel meets the requested budget.
  const PrivacyParams params = Params(c);
  const double slack = Unwrap(DeltaSlackClosedForm(kernel, params.epsilon()));
  if (slack > params.delta() + kDefaultViolationTolerance) {
    o.code = kExitViolation;
    o.report["released"] = false;
    o.report["delta_slack"] = slack;
    o.text = absl::StrCat("refused: kernel needs delta >= ", Num(slack),
                          " at epsilon ", Num(params.epsilon()), "\n");
    return o;
  }
  const auto mech = Unwrap(ProductKernel(kernel, db.n()));
  const Database out = Unwrap(Sample(mech, db, seed));
  Json rows = Json::array();
  for (std::size_t i = 0; i < out.n(); ++i) {
    rows.push_back(kernel.output_space().label(out[i]));
  }
  o.report["rows"] = std::move(rows);
  std::ostringstream csv;
  WriteDatabaseCsv(out, kernel.output_space(), csv);
  o.text = absl::StrCat("# seed ", seed, "\n", csv.str());
  return o;
}

Outcome QueryCommand(const CliConfig& c) {
  const FiniteKernel kernel = Unwrap(LoadKernel(Need(c.kernel_path, "kernel")));
  const Database db =
      Unwrap(LoadDatabase(Need(c.db_path, "db"), kernel.input_space()));
  const auto mech = Unwrap(ProductKernel(kernel, db.n()));
  const Json doc = Unwrap(LoadJsonFile(Need(c.query_path, "query")));
  const auto query = Unwrap(QueryFromJson(doc, kernel.output_space(), db.n()));
  Outcome o;
  o.report["query"] = query.name();
  if (c.mc_draws > 0) {
    const std::uint64_t seed = ResolveSeed(c);
    const auto est =
        Unwrap(PushforwardMonteCarlo(mech, db, query, c.mc_draws, seed));
    o.report["seed"] = seed;
    o.report["exact"] = false;
    const Json body = ToJson(est);
    for (const auto& [key, value] : body.items()) o.report[key] = value;
    for (std::size_t i = 0; i < est.support.size(); ++i) {
      absl::StrAppend(&o.text, est.support[i], "\t", Num(est.probs[i]),
                      " +/- ", Num(est.std_errors[i]), "\n");
    }
    return o;
  }
  auto dist = Pushforward(mech, db, query);
  if (!dist.ok() && dist.status().code() == absl::StatusCode::kResourceExhausted) {
    throw UsageError{absl::StrCat(dist.status().message(),
                                  " (pass --mc-draws for a Monte Carlo estimate)")};
  }
  const Distribution law = Unwrap(std::move(dist));
  o.report["exact"] = true;
  const Json body = ToJson(law);
  for (const auto& [key, value] : body.items()) o.report[key] = value;
  for (std::size_t i = 0; i < law.support.size(); ++i) {
    absl::StrAppend(&o.text, law.support[i], "\t", Num(law.probs[i]), "\n");
  }
  return o;
}

Outcome CertifyFunctionalCommand(const CliConfig& c) {
  const PrivacyParams params = Params(c);
  const double lo = Need(c.lo, "lo");
  const double hi = Need(c.hi, "hi");
  std::vector<double> grid;
  if (!c.functional_path.empty()) {
    grid = Unwrap(LoadFunctionalCsv(c.functional_path, lo, hi)).space.grid();
  } else if (c.k) {
    for (std::size_t j = 0; j < *c.k; ++j) {
      grid.push_back(*c.k == 1 ? 0.0 : static_cast<double>(j) / (*c.k - 1));
    }
  } else {
    throw UsageError{"certify-functional needs --k or --functional"};
  }
  const auto space = Unwrap(GridFunctionSpace::Create(grid, lo, hi));
  const double b = c.b ? *c.b : Unwrap(FunctionalLaplaceScale(space, params));
  const auto indices = ParseIndices(c.indices, space.k());
  const auto cert = Unwrap(CertifyProjectionDp(space, b, params, indices));
  Outcome o;
  o.report = ToJson(cert);
  o.code = cert.certified ? kExitOk : kExitViolation;
  o.text = absl::StrCat(cert.certified ? "CERTIFIED" : "NOT CERTIFIED",
                        "  worst_ratio = ", Num(cert.worst_ratio),
                        "  threshold = ", Num(cert.threshold), "\n");
  return o;
}

Outcome DecomposeCommand(const CliConfig& c) {
  const Json doc = Unwrap(LoadJsonFile(Need(c.rects_path, "rects")));
  const auto rects = Unwrap(RectanglesFromJson(doc));
  const auto dec = Unwrap(DecomposeRectangles(rects));
  Outcome o;
  o.report = ToJson(dec);
  for (const auto& part : dec.parts) {
    absl::StrAppend(&o.text, "{", absl::StrJoin(part.rect.a, ","), "} x {",
                    absl::StrJoin(part.rect.b, ","), "}\n");
  }
  return o;
}

void AddParams(CLI::App* app, CliConfig& c) {
  app->add_option("--epsilon", c.epsilon, "privacy parameter epsilon >= 0");
  app->add_option("--delta", c.delta, "privacy parameter delta in [0, 1]");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CliConfig c;
  CLI::App app{"Build, calibrate and verify (epsilon, delta)-private mechanisms "
               "on finite metric spaces."};
  app.name("metricdp");
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* calibrate = app.add_subcommand("calibrate", "minimal private parameters");
  calibrate->require_subcommand(1);
  auto* cal_rr = calibrate->add_subcommand("rr", "randomized response p");
  AddParams(cal_rr, c);
  cal_rr->add_option("--m", c.m, "|D| - 1");
  cal_rr->add_option("--space", c.space_path, "metric-space file");
  auto* cal_lap = calibrate->add_subcommand("laplace", "Laplace scale b");
  AddParams(cal_lap, c);
  cal_lap->add_option("--diam", c.diam, "diameter of the data interval");
  cal_lap->add_option("--lo", c.lo, "lower value bound");
  cal_lap->add_option("--hi", c.hi, "upper value bound");
  auto* cal_fun = calibrate->add_subcommand("functional", "grid Laplace scale b");
  AddParams(cal_fun, c);
  cal_fun->add_option("--k", c.k, "number of grid points");
  cal_fun->add_option("--functional", c.functional_path, "functional CSV");
  cal_fun->add_option("--lo", c.lo, "lower value bound");
  cal_fun->add_option("--hi", c.hi, "upper value bound");

  auto* verify = app.add_subcommand("verify", "check (epsilon, delta)-DP");
  AddParams(verify, c);
  verify->add_option("--kernel", c.kernel_path, "kernel file");
  verify->add_option("--mode", c.mode)
      ->check(CLI::IsMember({"exhaustive", "product", "query"}));
  verify->add_option("--n", c.n, "database rows (product and query modes)");
  verify->add_option("--query", c.query_path, "query file (query mode)");
  verify->add_option("--tolerance", c.tolerance, "violation tolerance (default 1e-9)");
  verify->add_option("--threads", c.threads, "worker threads for the pair scan");

  auto* slack = app.add_subcommand("slack", "minimal delta at a given epsilon");
  AddParams(slack, c);
  slack->add_option("--kernel", c.kernel_path, "kernel file");
  slack->add_option("--tolerance", c.tolerance, "violation tolerance (default 1e-9)");

  auto* error = app.add_subcommand("error", "expected error and lower bounds");
  AddParams(error, c);
  error->add_option("--kernel", c.kernel_path, "kernel file");
  error->add_option("--space", c.space_path, "metric on the output space");
  error->add_flag("--tightness", c.tightness,
                  "check calibrated randomized response on a discrete space");

  auto* sanitize = app.add_subcommand("sanitize", "release a sanitised database");
  AddParams(sanitize, c);
  sanitize->add_option("--kernel", c.kernel_path, "kernel file");
  sanitize->add_option("--db", c.db_path, "database CSV");
  sanitize->add_option("--functional", c.functional_path, "functional CSV");
  sanitize->add_option("--lo", c.lo, "lower value bound");
  sanitize->add_option("--hi", c.hi, "upper value bound");
  sanitize->add_option("--b", c.b, "Laplace scale (default: calibrated)");
  sanitize->add_option("--seed", c.seed, "RNG seed (generated and printed if absent)");

  auto* query = app.add_subcommand("query", "law of a query on the sanitised data");
  query->add_option("--kernel", c.kernel_path, "kernel file");
  query->add_option("--db", c.db_path, "database CSV");
  query->add_option("--query", c.query_path, "query file");
  query->add_option("--mc-draws", c.mc_draws, "Monte Carlo draws (0 = exact)");
  query->add_option("--seed", c.seed, "RNG seed (generated and printed if absent)");

  auto* certify =
      app.add_subcommand("certify-functional", "certify grid projections");
  AddParams(certify, c);
  certify->add_option("--functional", c.functional_path, "functional CSV");
  certify->add_option("--k", c.k, "number of grid points");
  certify->add_option("--lo", c.lo, "lower value bound");
  certify->add_option("--hi", c.hi, "upper value bound");
  certify->add_option("--b", c.b, "Laplace scale (default: calibrated)");
  certify->add_option("--indices", c.indices, "0-based grid positions, e.g. 0,2");

  auto* decompose =
      app.add_subcommand("decompose", "disjoint rectangle decomposition");
  decompose->add_option("--rects", c.rects_path, "rectangles file");

  // Global flags such as --format may follow the subcommand.
  for (CLI::App* sub : {calibrate, cal_rr, cal_lap, cal_fun, verify, slack, error,
                        sanitize, query, certify, decompose}) {
    sub->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "metricdp: " << e.what() << "\n";
    return kExitUsage;
  }
  c.format = format == "text" ? Format::kText : Format::kJson;

  try {
    Outcome o;
    if (calibrate->parsed()) {
      c.calibrate_target = cal_rr->parsed()    ? "rr"
                           : cal_lap->parsed() ? "laplace"
                                               : "functional";
      o = CalibrateCommand(c);
    } else if (verify->parsed()) {
      o = VerifyCommand(c);
    } else if (slack->parsed()) {
      o = SlackCommand(c);
    } else if (error->parsed()) {
      o = ErrorCommand(c);
    } else if (sanitize->parsed()) {
      o = SanitizeCommand(c);
    } else if (query->parsed()) {
      o = QueryCommand(c);
    } else if (certify->parsed()) {
      o = CertifyFunctionalCommand(c);
    } else {
      o = DecomposeCommand(c);
    }
    if (c.format == Format::kJson) {
      out << o.report.dump(2) << "\n";
    } else {
      out << o.text;
    }
    return o.code;
  } catch (const UsageError& e) {
    err << "metricdp: " << e.message << "\n";
    return kExitUsage;
  }
}

}  // namespace metricdp
