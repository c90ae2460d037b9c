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

#include <map>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "metricdp/metric_space.h"

namespace metricdp {
namespace {

FiniteMetricSpace Abc() { return *DiscreteMetricSpace({"a", "b", "c"}); }

TEST(TupleCodingTest, RoundTripsAndRowZeroIsMostSignificant) {
  std::vector<std::size_t> tuple(3);
  for (std::uint64_t code = 0; code < 27; ++code) {
    DecodeTuple(code, 3, tuple);
    EXPECT_EQ(EncodeTuple(tuple, 3), code);
    EXPECT_EQ(tuple[0], code / 9);
    EXPECT_EQ(tuple[2], code % 3);
  }
}

TEST(CheckedPowerTest, GuardsOverflow) {
  EXPECT_EQ(*CheckedPower(3, 4, 100), 81u);
  EXPECT_EQ(*CheckedPower(7, 0, 1), 1u);
  EXPECT_FALSE(CheckedPower(3, 5, 100).ok());
  EXPECT_FALSE(CheckedPower(1u << 31, 3, UINT64_MAX).ok());
}

TEST(QueryTest, IdentityLabelsTuples) {
  auto q = FiniteQuery::Identity(Abc(), 2);
  ASSERT_TRUE(q.ok());
  EXPECT_EQ(q->response_count(), 9u);
  std::vector<std::size_t> t = {2, 0};
  EXPECT_EQ(q->ResponseLabel(q->Evaluate(t)), "c,a");
}

TEST(QueryTest, CountMatchesManualTally) {
  auto space = Abc();
  auto q = FiniteQuery::Count(space, "b", 3);
  ASSERT_TRUE(q.ok());
  EXPECT_EQ(q->response_count(), 4u);
  std::vector<std::size_t> tuple(3);
  for (std::uint64_t code = 0; code < 27; ++code) {
    DecodeTuple(code, 3, tuple);
    std::size_t tally = 0;
    for (std::size_t v : tuple) tally += v == 1;
    EXPECT_EQ(q->Evaluate(tuple), tally);
    EXPECT_EQ(q->ResponseLabel(tally), std::to_string(tally));
  }
  EXPECT_FALSE(FiniteQuery::Count(space, "zz", 3).ok());
}

TEST(QueryTest, ModeBreaksTiesTowardLowestIndex) {
  auto q = FiniteQuery::Mode(Abc(), 4);
  ASSERT_TRUE(q.ok());
  std::vector<std::size_t> tie = {2, 1, 2, 1};
  EXPECT_EQ(q->ResponseLabel(q->Evaluate(tie)), "b");
  std::vector<std::size_t> clear = {2, 0, 2, 1};
  EXPECT_EQ(q->ResponseLabel(q->Evaluate(clear)), "c");
}

TEST(QueryTest, ConstantAndHistogram) {
  auto c = FiniteQuery::Constant(Abc(), 2);
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->response_count(), 1u);
  std::vector<std::size_t> t = {0, 2};
  EXPECT_EQ(c->ResponseLabel(c->Evaluate(t)), "c");

  auto h = FiniteQuery::Histogram(Abc(), 3);
  ASSERT_TRUE(h.ok());
  EXPECT_EQ(h->response_count(), 64u);
  std::vector<std::size_t> rows = {2, 0, 2};
  EXPECT_EQ(h->ResponseLabel(h->Evaluate(rows)), "1;0;2");
}

TEST(QueryTest, TableMustBeTotal) {
  auto space = *DiscreteMetricSpace({"a", "b"});
  std::map<std::string, std::string> table = {
      {"a,a", "same"}, {"a,b", "diff"}, {"b,a", "diff"}, {"b,b", "same"}};
  auto q = FiniteQuery::Table(space, 2, table);
  ASSERT_TRUE(q.ok()) << q.status();
  EXPECT_EQ(q->response_count(), 2u);
  std::vector<std::size_t> ab = {0, 1};
  EXPECT_EQ(q->ResponseLabel(q->Evaluate(ab)), "diff");
  table.erase("b,b");
  EXPECT_FALSE(FiniteQuery::Table(space, 2, table).ok());
  table["b,b"] = "same";
  table["c,c"] = "x";
  EXPECT_FALSE(FiniteQuery::Table(space, 2, table).ok());
}

TEST(QueryTest, RejectsZeroArity) {
  EXPECT_FALSE(FiniteQuery::Identity(Abc(), 0).ok());
}

}  // namespace
}  // namespace metricdp
