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

#include "metricdp/io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"

namespace metricdp {
namespace {

absl::Status FieldError(absl::string_view field, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("field '", field, "': ", what));
}

absl::StatusOr<const Json*> Require(const Json& doc, absl::string_view field) {
  if (!doc.is_object()) return FieldError(field, "enclosing value is not an object");
  auto it = doc.find(field);
  if (it == doc.end()) return FieldError(field, "missing");
  return &*it;
}

absl::StatusOr<double> AsReal(const Json& v, absl::string_view field) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (!v.is_number()) return FieldError(field, "expected a number");
  return v.get<double>();
}

absl::StatusOr<std::uint64_t> AsCount(const Json& v, absl::string_view field) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    return FieldError(field, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

absl::StatusOr<bool> AsBool(const Json& v, absl::string_view field) {
  if (!v.is_boolean()) return FieldError(field, "expected a boolean");
  return v.get<bool>();
}

absl::StatusOr<std::string> AsString(const Json& v, absl::string_view field) {
  if (!v.is_string()) return FieldError(field, "expected a string");
  return v.get<std::string>();
}

absl::StatusOr<std::vector<std::string>> AsStrings(const Json& v,
                                                   absl::string_view field) {
  if (!v.is_array()) return FieldError(field, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      return FieldError(field, absl::StrCat("element ", i, " is not a string"));
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

absl::StatusOr<std::vector<std::vector<double>>> AsMatrix(
    const Json& v, absl::string_view field) {
  if (!v.is_array()) return FieldError(field, "expected an array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array()) {
      return FieldError(field, absl::StrCat("row ", i, " is not an array"));
    }
    std::vector<double> row;
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      if (!v[i][j].is_number()) {
        return FieldError(field,
                          absl::StrCat("entry [", i, "][", j, "] is not a number"));
      }
      row.push_back(v[i][j].get<double>());
    }
    out.push_back(std::move(row));
  }
  return out;
}

#define METRICDP_ASSIGN_OR_RETURN(lhs, expr) \
  auto lhs##_or = (expr);                    \
  if (!lhs##_or.ok()) return lhs##_or.status(); \
  auto lhs = std::move(*lhs##_or)

Json Real(double v) {
  // Non-finite values (an unbounded threshold) are written as null.
  if (!std::isfinite(v)) return Json(nullptr);
  return Json(v);
}

Json StringArray(const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

Json SetArray(const PointSet& s) {
  Json out = Json::array();
  for (const auto& e : s) out.push_back(e);
  return out;
}

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path.string(), "'"));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::string_view CleanField(absl::string_view field) {
  field = absl::StripAsciiWhitespace(field);
  if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
    field = field.substr(1, field.size() - 2);
  }
  return field;
}

std::vector<absl::string_view> SplitLines(absl::string_view text) {
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& line : lines) line = absl::StripSuffix(line, "\r");
  return lines;
}

}  // namespace

absl::StatusOr<Json> ParseJson(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(origin), ": malformed JSON: ", e.what()));
  }
}

absl::StatusOr<Json> LoadJsonFile(const std::filesystem::path& path) {
  METRICDP_ASSIGN_OR_RETURN(text, ReadFile(path));
  return ParseJson(text, path.string());
}

absl::StatusOr<FiniteMetricSpace> SpaceFromJson(
    const Json& doc, const std::filesystem::path& base_dir) {
  if (doc.is_string()) return LoadSpace(base_dir / doc.get<std::string>());
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("metric space must be an object or a path");
  }
  std::string kind = "matrix";
  if (auto it = doc.find("kind"); it != doc.end()) {
    METRICDP_ASSIGN_OR_RETURN(k, AsString(*it, "kind"));
    kind = k;
  }
  if (kind == "discrete") {
    METRICDP_ASSIGN_OR_RETURN(field, Require(doc, "labels"));
    METRICDP_ASSIGN_OR_RETURN(labels, AsStrings(*field, "labels"));
    return DiscreteMetricSpace(std::move(labels));
  }
  if (kind == "powerset") {
    METRICDP_ASSIGN_OR_RETURN(field, Require(doc, "universe"));
    METRICDP_ASSIGN_OR_RETURN(universe, AsStrings(*field, "universe"));
    return SymmetricDifferenceSpace(std::move(universe));
  }
  if (kind != "matrix") {
    return FieldError("kind", absl::StrCat("unknown space kind '", kind, "'"));
  }
  METRICDP_ASSIGN_OR_RETURN(labels_field, Require(doc, "labels"));
  METRICDP_ASSIGN_OR_RETURN(labels, AsStrings(*labels_field, "labels"));
  METRICDP_ASSIGN_OR_RETURN(dist_field, Require(doc, "dist"));
  METRICDP_ASSIGN_OR_RETURN(dist, AsMatrix(*dist_field, "dist"));
  return BuildFiniteSpace(std::move(labels), std::move(dist));
}

absl::StatusOr<FiniteMetricSpace> LoadSpace(const std::filesystem::path& path) {
  METRICDP_ASSIGN_OR_RETURN(doc, LoadJsonFile(path));
  auto space = SpaceFromJson(doc, path.parent_path());
  if (!space.ok()) {
    return absl::Status(space.status().code(),
                        absl::StrCat(path.string(), ": ",
                                     space.status().message()));
  }
  return space;
}

Json SpaceToJson(const FiniteMetricSpace& space) {
  Json out;
  switch (space.kind()) {
    case FiniteMetricSpace::Kind::kDiscrete:
      out["kind"] = "discrete";
      out["labels"] = StringArray(space.labels());
      return out;
    case FiniteMetricSpace::Kind::kSymmetricDifference:
      out["kind"] = "powerset";
      out["universe"] = StringArray(space.universe());
      return out;
    case FiniteMetricSpace::Kind::kMatrix:
      break;
  }
  out["labels"] = StringArray(space.labels());
  out["dist"] = space.DistanceMatrix();
  return out;
}

absl::StatusOr<FiniteKernel> KernelFromJson(
    const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) return absl::InvalidArgumentError("kernel must be an object");
  if (auto it = doc.find("kind"); it != doc.end()) {
    METRICDP_ASSIGN_OR_RETURN(kind, AsString(*it, "kind"));
    if (kind != "rr") {
      return FieldError("kind", absl::StrCat("unknown kernel kind '", kind, "'"));
    }
    METRICDP_ASSIGN_OR_RETURN(space_field, Require(doc, "space"));
    METRICDP_ASSIGN_OR_RETURN(space, SpaceFromJson(*space_field, base_dir));
    METRICDP_ASSIGN_OR_RETURN(p_field, Require(doc, "p"));
    if (!p_field->is_number()) return FieldError("p", "expected a number");
    return RandomizedResponseKernel(space, p_field->get<double>());
  }
  METRICDP_ASSIGN_OR_RETURN(in_field, Require(doc, "input_space"));
  METRICDP_ASSIGN_OR_RETURN(input, SpaceFromJson(*in_field, base_dir));
  std::optional<FiniteMetricSpace> output;
  if (auto it = doc.find("output_space"); it != doc.end() && !it->is_null()) {
    METRICDP_ASSIGN_OR_RETURN(out, SpaceFromJson(*it, base_dir));
    output = std::move(out);
  }
  METRICDP_ASSIGN_OR_RETURN(probs_field, Require(doc, "probs"));
  METRICDP_ASSIGN_OR_RETURN(probs, AsMatrix(*probs_field, "probs"));
  if (output) {
    return FiniteKernel::Create(std::move(input), std::move(*output),
                                std::move(probs));
  }
  return FiniteKernel::Create(std::move(input), std::move(probs));
}

absl::StatusOr<FiniteKernel> LoadKernel(const std::filesystem::path& path) {
  METRICDP_ASSIGN_OR_RETURN(doc, LoadJsonFile(path));
  auto kernel = KernelFromJson(doc, path.parent_path());
  if (!kernel.ok()) {
    return absl::Status(kernel.status().code(),
                        absl::StrCat(path.string(), ": ",
                                     kernel.status().message()));
  }
  return kernel;
}

Json KernelToJson(const FiniteKernel& kernel) {
  Json out;
  out["input_space"] = SpaceToJson(kernel.input_space());
  if (!(kernel.output_space() == kernel.input_space())) {
    out["output_space"] = SpaceToJson(kernel.output_space());
  }
  out["probs"] = kernel.ProbabilityMatrix();
  return out;
}

absl::StatusOr<FiniteQuery> QueryFromJson(const Json& doc,
                                          const FiniteMetricSpace& space,
                                          std::size_t n) {
  METRICDP_ASSIGN_OR_RETURN(kind_field, Require(doc, "kind"));
  METRICDP_ASSIGN_OR_RETURN(kind, AsString(*kind_field, "kind"));
  if (kind == "identity") return FiniteQuery::Identity(space, n);
  if (kind == "mode") return FiniteQuery::Mode(space, n);
  if (kind == "histogram") return FiniteQuery::Histogram(space, n);
  if (kind == "count") {
    METRICDP_ASSIGN_OR_RETURN(label_field, Require(doc, "label"));
    METRICDP_ASSIGN_OR_RETURN(label, AsString(*label_field, "label"));
    return FiniteQuery::Count(space, label, n);
  }
  if (kind == "constant") {
    std::string value = "c";
    if (auto it = doc.find("value"); it != doc.end()) {
      METRICDP_ASSIGN_OR_RETURN(v, AsString(*it, "value"));
      value = v;
    }
    return FiniteQuery::Constant(space, n, std::move(value));
  }
  if (kind == "table") {
    METRICDP_ASSIGN_OR_RETURN(map_field, Require(doc, "map"));
    if (!map_field->is_object()) return FieldError("map", "expected an object");
    std::map<std::string, std::string> table;
    for (auto it = map_field->begin(); it != map_field->end(); ++it) {
      if (!it.value().is_string()) {
        return FieldError("map", absl::StrCat("value for '", it.key(),
                                              "' is not a string"));
      }
      table[it.key()] = it.value().get<std::string>();
    }
    return FiniteQuery::Table(space, n, table);
  }
  return FieldError("kind", absl::StrCat("unknown query kind '", kind, "'"));
}

absl::StatusOr<Database> ReadDatabaseCsv(std::istream& in,
                                         const FiniteMetricSpace& space) {
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<std::size_t> rows;
  const bool powerset =
      space.kind() == FiniteMetricSpace::Kind::kSymmetricDifference;
  std::size_t line_no = 0;
  for (absl::string_view line : SplitLines(text)) {
    ++line_no;
    absl::string_view field = CleanField(line);
    if (powerset) {
      std::size_t mask = 0;
      for (absl::string_view member : absl::StrSplit(field, ';')) {
        member = absl::StripAsciiWhitespace(member);
        if (member.empty()) continue;
        const auto& universe = space.universe();
        auto it = std::find(universe.begin(), universe.end(), member);
        if (it == universe.end()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "line ", line_no, ": '", member, "' is not in the universe"));
        }
        mask |= std::size_t{1} << (it - universe.begin());
      }
      rows.push_back(mask);
      continue;
    }
    auto idx = space.IndexOf(std::string(field));
    if (!idx) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": unknown label '", field, "'"));
    }
    rows.push_back(*idx);
  }
  return Database::Create(space, std::move(rows));
}

absl::StatusOr<Database> LoadDatabase(const std::filesystem::path& path,
                                      const FiniteMetricSpace& space) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path.string(), "'"));
  }
  auto db = ReadDatabaseCsv(in, space);
  if (!db.ok()) {
    return absl::Status(db.status().code(),
                        absl::StrCat(path.string(), ": ", db.status().message()));
  }
  return db;
}

void WriteDatabaseCsv(const Database& db, const FiniteMetricSpace& space,
                      std::ostream& out) {
  for (std::size_t i = 0; i < db.n(); ++i) out << space.label(db[i]) << '\n';
}

absl::StatusOr<FunctionalDataset> ReadFunctionalCsv(std::istream& in,
                                                    double lo, double hi) {
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<std::vector<double>> table;
  std::size_t line_no = 0;
  for (absl::string_view line : SplitLines(text)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<double> values;
    for (absl::string_view cell : absl::StrSplit(line, ',')) {
      double v = 0.0;
      if (!absl::SimpleAtod(CleanField(cell), &v)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, ": '", cell, "' is not a number"));
      }
      values.push_back(v);
    }
    table.push_back(std::move(values));
  }
  if (table.empty()) {
    return absl::InvalidArgumentError("functional data has no grid row");
  }
  METRICDP_ASSIGN_OR_RETURN(space, GridFunctionSpace::Create(table[0], lo, hi));
  FunctionalDataset out{space, {}};
  for (std::size_t r = 1; r < table.size(); ++r) {
    auto f = GridFunction::Clipped(space, std::move(table[r]));
    if (!f.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("record ", r, ": ", f.status().message()));
    }
    out.records.push_back(std::move(*f));
  }
  return out;
}

absl::StatusOr<FunctionalDataset> LoadFunctionalCsv(
    const std::filesystem::path& path, double lo, double hi) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path.string(), "'"));
  }
  auto data = ReadFunctionalCsv(in, lo, hi);
  if (!data.ok()) {
    return absl::Status(data.status().code(), absl::StrCat(path.string(), ": ",
                                                           data.status().message()));
  }
  return data;
}

absl::StatusOr<std::vector<Rectangle>> RectanglesFromJson(const Json& doc) {
  METRICDP_ASSIGN_OR_RETURN(list, Require(doc, "rectangles"));
  if (!list->is_array()) return FieldError("rectangles", "expected an array");
  std::vector<Rectangle> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const Json& item = (*list)[i];
    const std::string where = absl::StrCat("rectangles[", i, "]");
    auto a_field = Require(item, "a");
    auto b_field = Require(item, "b");
    if (!a_field.ok() || !b_field.ok()) {
      return FieldError(where, "each rectangle needs 'a' and 'b'");
    }
    METRICDP_ASSIGN_OR_RETURN(a, AsStrings(**a_field, where + ".a"));
    METRICDP_ASSIGN_OR_RETURN(b, AsStrings(**b_field, where + ".b"));
    out.push_back({PointSet(a.begin(), a.end()), PointSet(b.begin(), b.end())});
  }
  return out;
}

Json ToJson(const VerificationReport& report) {
  Json out;
  out["passed"] = report.passed;
  if (report.witness) {
    Json w;
    w["d"] = report.witness->d;
    w["d_prime"] = report.witness->d_prime;
    w["event"] = StringArray(report.witness->event);
    w["lhs"] = Real(report.witness->lhs);
    w["rhs"] = Real(report.witness->rhs);
    out["witness"] = std::move(w);
  } else {
    out["witness"] = nullptr;
  }
  out["max_violation"] = Real(report.max_violation);
  out["pairs_checked"] = report.pairs_checked;
  out["events_checked"] = report.events_checked;
  return out;
}

Json ToJson(const ErrorReport& report) {
  Json out;
  Json per_point = Json::array();
  for (const auto& p : report.per_point) {
    Json item;
    item["d"] = p.point;
    item["expected_error"] = Real(p.expected_error);
    per_point.push_back(std::move(item));
  }
  out["per_point"] = std::move(per_point);
  out["max_error"] = Real(report.max_error);
  out["bound_general"] = Real(report.bound_general);
  out["bound_finite"] = Real(report.bound_finite);
  out["tight"] = report.tight;
  out["vacuous"] = report.vacuous;
  return out;
}

Json ToJson(const TightnessReport& report) {
  Json out;
  out["m"] = report.m;
  out["p"] = Real(report.p);
  out["max_error"] = Real(report.max_error);
  out["bound_finite"] = Real(report.bound_finite);
  out["tight"] = report.tight;
  out["dp_passed"] = report.dp_passed;
  return out;
}

Json ToJson(const ProjectionCertificate& cert) {
  Json out;
  out["indices"] = cert.indices;
  out["b"] = Real(cert.b);
  out["worst_ratio"] = Real(cert.worst_ratio);
  out["threshold"] = Real(cert.threshold);
  out["certified"] = cert.certified;
  return out;
}

Json ToJson(const RectangleDecomposition& decomposition) {
  Json parts = Json::array();
  for (const auto& part : decomposition.parts) {
    Json item;
    item["indices"] = part.indices;
    item["a"] = SetArray(part.rect.a);
    item["b"] = SetArray(part.rect.b);
    parts.push_back(std::move(item));
  }
  Json out;
  out["parts"] = std::move(parts);
  return out;
}

Json ToJson(const Distribution& dist) {
  Json support = Json::array();
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    Json item;
    item["response"] = dist.support[i];
    item["prob"] = Real(dist.probs[i]);
    support.push_back(std::move(item));
  }
  Json out;
  out["law"] = std::move(support);
  return out;
}

Json ToJson(const MonteCarloEstimate& estimate) {
  Json support = Json::array();
  for (std::size_t i = 0; i < estimate.support.size(); ++i) {
    Json item;
    item["response"] = estimate.support[i];
    item["prob"] = Real(estimate.probs[i]);
    item["std_error"] = Real(estimate.std_errors[i]);
    support.push_back(std::move(item));
  }
  Json out;
  out["draws"] = estimate.draws;
  out["law"] = std::move(support);
  return out;
}

absl::StatusOr<VerificationReport> VerificationReportFromJson(const Json& doc) {
  VerificationReport r;
  METRICDP_ASSIGN_OR_RETURN(passed, Require(doc, "passed"));
  METRICDP_ASSIGN_OR_RETURN(passed_v, AsBool(*passed, "passed"));
  r.passed = passed_v;
  METRICDP_ASSIGN_OR_RETURN(witness, Require(doc, "witness"));
  if (!witness->is_null()) {
    Witness w;
    METRICDP_ASSIGN_OR_RETURN(d, Require(*witness, "d"));
    METRICDP_ASSIGN_OR_RETURN(d_v, AsString(*d, "witness.d"));
    w.d = d_v;
    METRICDP_ASSIGN_OR_RETURN(dp, Require(*witness, "d_prime"));
    METRICDP_ASSIGN_OR_RETURN(dp_v, AsString(*dp, "witness.d_prime"));
    w.d_prime = dp_v;
    METRICDP_ASSIGN_OR_RETURN(event, Require(*witness, "event"));
    METRICDP_ASSIGN_OR_RETURN(event_v, AsStrings(*event, "witness.event"));
    w.event = event_v;
    METRICDP_ASSIGN_OR_RETURN(lhs, Require(*witness, "lhs"));
    METRICDP_ASSIGN_OR_RETURN(lhs_v, AsReal(*lhs, "witness.lhs"));
    w.lhs = lhs_v;
    METRICDP_ASSIGN_OR_RETURN(rhs, Require(*witness, "rhs"));
    METRICDP_ASSIGN_OR_RETURN(rhs_v, AsReal(*rhs, "witness.rhs"));
    w.rhs = rhs_v;
    r.witness = std::move(w);
  }
  METRICDP_ASSIGN_OR_RETURN(mv, Require(doc, "max_violation"));
  METRICDP_ASSIGN_OR_RETURN(mv_v, AsReal(*mv, "max_violation"));
  r.max_violation = mv_v;
  METRICDP_ASSIGN_OR_RETURN(pc, Require(doc, "pairs_checked"));
  METRICDP_ASSIGN_OR_RETURN(pc_v, AsCount(*pc, "pairs_checked"));
  r.pairs_checked = pc_v;
  METRICDP_ASSIGN_OR_RETURN(ec, Require(doc, "events_checked"));
  METRICDP_ASSIGN_OR_RETURN(ec_v, AsCount(*ec, "events_checked"));
  r.events_checked = ec_v;
  return r;
}

absl::StatusOr<ErrorReport> ErrorReportFromJson(const Json& doc) {
  ErrorReport r;
  METRICDP_ASSIGN_OR_RETURN(pp, Require(doc, "per_point"));
  if (!pp->is_array()) return FieldError("per_point", "expected an array");
  for (const Json& item : *pp) {
    METRICDP_ASSIGN_OR_RETURN(d, Require(item, "d"));
    METRICDP_ASSIGN_OR_RETURN(d_v, AsString(*d, "per_point.d"));
    METRICDP_ASSIGN_OR_RETURN(e, Require(item, "expected_error"));
    METRICDP_ASSIGN_OR_RETURN(e_v, AsReal(*e, "per_point.expected_error"));
    r.per_point.push_back({d_v, e_v});
  }
  METRICDP_ASSIGN_OR_RETURN(me, Require(doc, "max_error"));
  METRICDP_ASSIGN_OR_RETURN(me_v, AsReal(*me, "max_error"));
  r.max_error = me_v;
  METRICDP_ASSIGN_OR_RETURN(bg, Require(doc, "bound_general"));
  METRICDP_ASSIGN_OR_RETURN(bg_v, AsReal(*bg, "bound_general"));
  r.bound_general = bg_v;
  METRICDP_ASSIGN_OR_RETURN(bf, Require(doc, "bound_finite"));
  METRICDP_ASSIGN_OR_RETURN(bf_v, AsReal(*bf, "bound_finite"));
  r.bound_finite = bf_v;
  METRICDP_ASSIGN_OR_RETURN(t, Require(doc, "tight"));
  METRICDP_ASSIGN_OR_RETURN(t_v, AsBool(*t, "tight"));
  r.tight = t_v;
  METRICDP_ASSIGN_OR_RETURN(v, Require(doc, "vacuous"));
  METRICDP_ASSIGN_OR_RETURN(v_v, AsBool(*v, "vacuous"));
  r.vacuous = v_v;
  return r;
}

absl::StatusOr<TightnessReport> TightnessReportFromJson(const Json& doc) {
  TightnessReport r;
  METRICDP_ASSIGN_OR_RETURN(m, Require(doc, "m"));
  METRICDP_ASSIGN_OR_RETURN(m_v, AsCount(*m, "m"));
  r.m = m_v;
  METRICDP_ASSIGN_OR_RETURN(p, Require(doc, "p"));
  METRICDP_ASSIGN_OR_RETURN(p_v, AsReal(*p, "p"));
  r.p = p_v;
  METRICDP_ASSIGN_OR_RETURN(me, Require(doc, "max_error"));
  METRICDP_ASSIGN_OR_RETURN(me_v, AsReal(*me, "max_error"));
  r.max_error = me_v;
  METRICDP_ASSIGN_OR_RETURN(bf, Require(doc, "bound_finite"));
  METRICDP_ASSIGN_OR_RETURN(bf_v, AsReal(*bf, "bound_finite"));
  r.bound_finite = bf_v;
  METRICDP_ASSIGN_OR_RETURN(t, Require(doc, "tight"));
  METRICDP_ASSIGN_OR_RETURN(t_v, AsBool(*t, "tight"));
  r.tight = t_v;
  METRICDP_ASSIGN_OR_RETURN(dp, Require(doc, "dp_passed"));
  METRICDP_ASSIGN_OR_RETURN(dp_v, AsBool(*dp, "dp_passed"));
  r.dp_passed = dp_v;
  return r;
}

absl::StatusOr<ProjectionCertificate> ProjectionCertificateFromJson(
    const Json& doc) {
  ProjectionCertificate c;
  METRICDP_ASSIGN_OR_RETURN(idx, Require(doc, "indices"));
  if (!idx->is_array()) return FieldError("indices", "expected an array");
  for (const Json& v : *idx) {
    METRICDP_ASSIGN_OR_RETURN(i, AsCount(v, "indices"));
    c.indices.push_back(i);
  }
  METRICDP_ASSIGN_OR_RETURN(b, Require(doc, "b"));
  METRICDP_ASSIGN_OR_RETURN(b_v, AsReal(*b, "b"));
  c.b = b_v;
  METRICDP_ASSIGN_OR_RETURN(wr, Require(doc, "worst_ratio"));
  METRICDP_ASSIGN_OR_RETURN(wr_v, AsReal(*wr, "worst_ratio"));
  c.worst_ratio = wr_v;
  METRICDP_ASSIGN_OR_RETURN(th, Require(doc, "threshold"));
  METRICDP_ASSIGN_OR_RETURN(th_v, AsReal(*th, "threshold"));
  c.threshold = th_v;
  METRICDP_ASSIGN_OR_RETURN(ce, Require(doc, "certified"));
  METRICDP_ASSIGN_OR_RETURN(ce_v, AsBool(*ce, "certified"));
  c.certified = ce_v;
  return c;
}

absl::StatusOr<RectangleDecomposition> RectangleDecompositionFromJson(
    const Json& doc) {
  RectangleDecomposition out;
  METRICDP_ASSIGN_OR_RETURN(parts, Require(doc, "parts"));
  if (!parts->is_array()) return FieldError("parts", "expected an array");
  for (const Json& item : *parts) {
    RectangleDecompositionPart part;
    METRICDP_ASSIGN_OR_RETURN(idx, Require(item, "indices"));
    if (!idx->is_array()) return FieldError("parts.indices", "expected an array");
    for (const Json& v : *idx) {
      METRICDP_ASSIGN_OR_RETURN(i, AsCount(v, "parts.indices"));
      part.indices.push_back(i);
    }
    METRICDP_ASSIGN_OR_RETURN(a, Require(item, "a"));
    METRICDP_ASSIGN_OR_RETURN(a_v, AsStrings(*a, "parts.a"));
    METRICDP_ASSIGN_OR_RETURN(b, Require(item, "b"));
    METRICDP_ASSIGN_OR_RETURN(b_v, AsStrings(*b, "parts.b"));
    part.rect = {PointSet(a_v.begin(), a_v.end()),
                 PointSet(b_v.begin(), b_v.end())};
    out.parts.push_back(std::move(part));
  }
  return out;
}

}  // namespace metricdp
