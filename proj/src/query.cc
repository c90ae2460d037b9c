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

#include "metricdp/query.h"

#include <algorithm>
#include <limits>
#include <memory>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace metricdp {
namespace {

// Response sets larger than this are refused when they must be labelled.
constexpr std::uint64_t kMaxResponses = std::uint64_t{1} << 40;

absl::Status CheckArity(std::size_t n) {
  if (n == 0) return absl::InvalidArgumentError("query arity must be >= 1");
  return absl::OkStatus();
}

}  // namespace

std::string TupleLabel(const FiniteMetricSpace& space,
                       std::span<const std::size_t> tuple) {
  return absl::StrJoin(tuple, ",", [&space](std::string* out, std::size_t i) {
    out->append(space.label(i));
  });
}

FiniteQuery::FiniteQuery(std::string name, std::size_t domain_size,
                         std::size_t arity, std::uint64_t response_count,
                         Evaluator evaluate, Labeler labeler)
    : name_(std::move(name)),
      domain_size_(domain_size),
      arity_(arity),
      response_count_(response_count),
      evaluate_(std::move(evaluate)),
      labeler_(std::move(labeler)) {}

absl::StatusOr<std::uint64_t> CheckedPower(std::uint64_t base,
                                           std::uint64_t exponent,
                                           std::uint64_t limit) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > limit / base) {
      return absl::ResourceExhaustedError(absl::StrCat(
          base, "^", exponent, " exceeds the capacity limit ", limit));
    }
    result *= base;
  }
  if (result > limit) {
    return absl::ResourceExhaustedError(absl::StrCat(
        base, "^", exponent, " exceeds the capacity limit ", limit));
  }
  return result;
}

void DecodeTuple(std::uint64_t code, std::size_t radix,
                 std::span<std::size_t> tuple) {
  for (std::size_t i = tuple.size(); i-- > 0;) {
    tuple[i] = static_cast<std::size_t>(code % radix);
    code /= radix;
  }
}

std::uint64_t EncodeTuple(std::span<const std::size_t> tuple,
                          std::size_t radix) {
  std::uint64_t code = 0;
  for (std::size_t v : tuple) code = code * radix + v;
  return code;
}

absl::StatusOr<FiniteQuery> FiniteQuery::Identity(
    const FiniteMetricSpace& space, std::size_t n) {
  if (auto s = CheckArity(n); !s.ok()) return s;
  auto count = CheckedPower(space.size(), n, kMaxResponses);
  if (!count.ok()) return count.status();
  const std::size_t radix = space.size();
  auto shared = std::make_shared<const FiniteMetricSpace>(space);
  return FiniteQuery(
      "identity", radix, n, *count,
      [radix](std::span<const std::size_t> t) {
        return static_cast<std::size_t>(EncodeTuple(t, radix));
      },
      [shared, n](std::size_t r) {
        std::vector<std::size_t> tuple(n);
        DecodeTuple(r, shared->size(), tuple);
        return TupleLabel(*shared, tuple);
      });
}

absl::StatusOr<FiniteQuery> FiniteQuery::Count(const FiniteMetricSpace& space,
                                               std::string_view label,
                                               std::size_t n) {
  if (auto s = CheckArity(n); !s.ok()) return s;
  auto target = space.IndexOf(label);
  if (!target) {
    return absl::NotFoundError(
        absl::StrCat("count query: unknown label '", std::string(label), "'"));
  }
  const std::size_t t = *target;
  return FiniteQuery(
      absl::StrCat("count(", std::string(label), ")"), space.size(), n, n + 1,
      [t](std::span<const std::size_t> tuple) {
        return static_cast<std::size_t>(std::count(tuple.begin(), tuple.end(), t));
      },
      [](std::size_t r) { return absl::StrCat(r); });
}

absl::StatusOr<FiniteQuery> FiniteQuery::Mode(const FiniteMetricSpace& space,
                                              std::size_t n) {
  if (auto s = CheckArity(n); !s.ok()) return s;
  const std::size_t k = space.size();
  auto labels = std::make_shared<const std::vector<std::string>>(space.labels());
  return FiniteQuery(
      "mode", k, n, k,
      [k](std::span<const std::size_t> tuple) {
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t v : tuple) ++counts[v];
        return static_cast<std::size_t>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
      },
      [labels](std::size_t r) { return (*labels)[r]; });
}

absl::StatusOr<FiniteQuery> FiniteQuery::Constant(
    const FiniteMetricSpace& space, std::size_t n, std::string value) {
  if (auto s = CheckArity(n); !s.ok()) return s;
  return FiniteQuery(
      "constant", space.size(), n, 1,
      [](std::span<const std::size_t>) { return std::size_t{0}; },
      [value = std::move(value)](std::size_t) { return value; });
}

absl::StatusOr<FiniteQuery> FiniteQuery::Histogram(
    const FiniteMetricSpace& space, std::size_t n) {
  if (auto s = CheckArity(n); !s.ok()) return s;
  const std::size_t k = space.size();
  auto count = CheckedPower(n + 1, k, kMaxResponses);
  if (!count.ok()) return count.status();
  return FiniteQuery(
      "histogram", k, n, *count,
      [k, n](std::span<const std::size_t> tuple) {
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t v : tuple) ++counts[v];
        return static_cast<std::size_t>(EncodeTuple(counts, n + 1));
      },
      [k, n](std::size_t r) {
        std::vector<std::size_t> counts(k);
        DecodeTuple(r, n + 1, counts);
        return absl::StrJoin(counts, ";");
      });
}

absl::StatusOr<FiniteQuery> FiniteQuery::Table(
    const FiniteMetricSpace& space, std::size_t n,
    const std::map<std::string, std::string>& table) {
  if (auto s = CheckArity(n); !s.ok()) return s;
  auto total = CheckedPower(space.size(), n, std::uint64_t{10'000'000});
  if (!total.ok()) return total.status();

  std::vector<std::string> responses;
  for (const auto& [key, value] : table) responses.push_back(value);
  std::sort(responses.begin(), responses.end());
  responses.erase(std::unique(responses.begin(), responses.end()),
                  responses.end());

  std::vector<std::size_t> lookup(*total);
  std::vector<std::size_t> tuple(n);
  for (std::uint64_t code = 0; code < *total; ++code) {
    DecodeTuple(code, space.size(), tuple);
    const std::string key = TupleLabel(space, tuple);
    auto it = table.find(key);
    if (it == table.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("table query is not total: no entry for tuple '", key,
                       "'"));
    }
    lookup[code] = static_cast<std::size_t>(
        std::lower_bound(responses.begin(), responses.end(), it->second) -
        responses.begin());
  }
  if (table.size() != *total) {
    return absl::InvalidArgumentError(absl::StrCat(
        "table query has ", table.size(), " entries but there are ", *total,
        " tuples; unknown keys present"));
  }

  const std::size_t radix = space.size();
  auto shared_lookup =
      std::make_shared<const std::vector<std::size_t>>(std::move(lookup));
  auto shared_responses =
      std::make_shared<const std::vector<std::string>>(std::move(responses));
  return FiniteQuery(
      "table", radix, n, shared_responses->size(),
      [shared_lookup, radix](std::span<const std::size_t> t) {
        return (*shared_lookup)[EncodeTuple(t, radix)];
      },
      [shared_responses](std::size_t r) { return (*shared_responses)[r]; });
}

}  // namespace metricdp
