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

#ifndef METRICDP_IO_H_
#define METRICDP_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "metricdp/accuracy.h"
#include "metricdp/functional.h"
#include "metricdp/mechanism.h"
#include "metricdp/metric_space.h"
#include "metricdp/query.h"
#include "metricdp/verifier.h"

namespace metricdp {

// Output documents keep insertion order so that emitted JSON is stable.
using Json = nlohmann::ordered_json;

absl::StatusOr<Json> ParseJson(std::string_view text, std::string_view origin);
absl::StatusOr<Json> LoadJsonFile(const std::filesystem::path& path);

// Metric-space documents:
//   {"labels": [...], "dist": [[...], ...]}
//   {"kind": "discrete", "labels": [...]}
//   {"kind": "powerset", "universe": [...]}
// A string value is read as a path relative to `base_dir`.
absl::StatusOr<FiniteMetricSpace> SpaceFromJson(
    const Json& doc, const std::filesystem::path& base_dir = {});
absl::StatusOr<FiniteMetricSpace> LoadSpace(const std::filesystem::path& path);
Json SpaceToJson(const FiniteMetricSpace& space);

// Kernel documents:
//   {"input_space": <space>, "output_space": <space, optional>,
//    "probs": [[...], ...]}
//   {"kind": "rr", "space": <space>, "p": <real>}
absl::StatusOr<FiniteKernel> KernelFromJson(
    const Json& doc, const std::filesystem::path& base_dir = {});
absl::StatusOr<FiniteKernel> LoadKernel(const std::filesystem::path& path);
Json KernelToJson(const FiniteKernel& kernel);

// Query documents over n-tuples of `space`:
//   {"kind": "identity"} | {"kind": "count", "label": ...} | {"kind": "mode"}
//   {"kind": "constant", "value": ...} | {"kind": "histogram"}
//   {"kind": "table", "map": {"a,b": "x", ...}}
absl::StatusOr<FiniteQuery> QueryFromJson(const Json& doc,
                                          const FiniteMetricSpace& space,
                                          std::size_t n);

// One record per line, a single label per record. For power-set spaces a
// record lists its members separated by ';' in any order, and an empty line
// is the empty set. A trailing newline does not start a record.
absl::StatusOr<Database> ReadDatabaseCsv(std::istream& in,
                                         const FiniteMetricSpace& space);
absl::StatusOr<Database> LoadDatabase(const std::filesystem::path& path,
                                      const FiniteMetricSpace& space);
void WriteDatabaseCsv(const Database& db, const FiniteMetricSpace& space,
                      std::ostream& out);

// Functional data: the first line holds the k grid times, each further line
// one record's k values. Values are clipped into [lo, hi].
struct FunctionalDataset {
  GridFunctionSpace space;
  std::vector<GridFunction> records;
};

absl::StatusOr<FunctionalDataset> ReadFunctionalCsv(std::istream& in,
                                                    double lo, double hi);
absl::StatusOr<FunctionalDataset> LoadFunctionalCsv(
    const std::filesystem::path& path, double lo, double hi);

// {"rectangles": [{"a": [...], "b": [...]}, ...]}
absl::StatusOr<std::vector<Rectangle>> RectanglesFromJson(const Json& doc);

Json ToJson(const VerificationReport& report);
Json ToJson(const ErrorReport& report);
Json ToJson(const TightnessReport& report);
Json ToJson(const ProjectionCertificate& cert);
Json ToJson(const RectangleDecomposition& decomposition);
Json ToJson(const Distribution& dist);
Json ToJson(const MonteCarloEstimate& estimate);

absl::StatusOr<VerificationReport> VerificationReportFromJson(const Json& doc);
absl::StatusOr<ErrorReport> ErrorReportFromJson(const Json& doc);
absl::StatusOr<TightnessReport> TightnessReportFromJson(const Json& doc);
absl::StatusOr<ProjectionCertificate> ProjectionCertificateFromJson(
    const Json& doc);
absl::StatusOr<RectangleDecomposition> RectangleDecompositionFromJson(
    const Json& doc);

}  // namespace metricdp

#endif  // METRICDP_IO_H_
