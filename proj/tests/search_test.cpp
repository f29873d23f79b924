/*
 * Copyright 2026 The mpembed Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "mpembed/error.hpp"
#include "mpembed/search.hpp"
#include "oracles.hpp"

namespace mpembed {
namespace {

EmbeddingTable table_of(std::vector<std::pair<std::string, std::vector<double>>> rows) {
  EmbeddingTable t;
  t.dim = rows.front().second.size();
  for (auto& [name, v] : rows) {
    t.names.push_back(name);
    t.values.insert(t.values.end(), v.begin(), v.end());
  }
  return t;
}

TEST(Cosine, Examples) {
  std::vector<double> x{0.3, -2.0, 5.0};
  std::vector<double> e1{1.0, 0.0};
  std::vector<double> e2{0.0, 1.0};
  std::vector<double> m1{-1.0, 0.0};
  EXPECT_DOUBLE_EQ(cosine(x, x), 1.0);
  EXPECT_EQ(cosine(e1, e2), 0.0);
  EXPECT_EQ(cosine(e1, m1), -1.0);
  std::vector<double> zero{0.0, 0.0};
  EXPECT_THROW(cosine(e1, zero), Error);
  EXPECT_THROW(cosine(e1, x), Error);
}

TEST(CosineProperty, StaysInRange) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> a(1 + rng.below(10)), b(a.size());
    for (auto& x : a) x = rng.uniform(-1e3, 1e3);
    for (std::size_t k = 0; k < a.size(); ++k) b[k] = rng.below(2) ? a[k] * 3.0 : rng.uniform(-1, 1);
    const double c = cosine(a, b);
    EXPECT_GE(c, -1.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(Index, UnitNormsAndExclusions) {
  auto t = table_of({{"a", {3.0, 4.0}}, {"z", {0.0, 0.0}}, {"b", {-1.0, 1e-3}}});
  SimilarityIndex index(t);
  EXPECT_EQ(index.size(), 2u);
  EXPECT_EQ(index.excluded(), std::vector<std::string>{"z"});
  for (std::size_t i = 0; i < index.size(); ++i) {
    double n = 0.0;
    for (double x : index.vector(i)) n += x * x;
    EXPECT_NEAR(std::sqrt(n), 1.0, 1e-6);
  }
  EXPECT_THROW(top_k(index, "z", 1), LookupError);
  EXPECT_THROW(top_k(index, "nope", 1), LookupError);
  EXPECT_THROW(top_k(index, "a", 0), Error);
}

TEST(TopK, OrdersByAngle) {
  const double r = std::numbers::pi / 180.0;
  auto t = table_of({{"q", {1.0, 0.0}},
                     {"deg90", {std::cos(90 * r), std::sin(90 * r)}},
                     {"deg0", {2.0, 0.0}},
                     {"deg60", {std::cos(60 * r), std::sin(60 * r)}}});
  SimilarityIndex index(t);
  auto hits = top_k(index, "q", 3);
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].vertex, "deg0");
  EXPECT_EQ(hits[1].vertex, "deg60");
  EXPECT_EQ(hits[2].vertex, "deg90");
  EXPECT_EQ(top_k(index, "q", 50).size(), 3u);
}

TEST(TopK, TiesBreakByAscendingId) {
  auto t = table_of({{"q", {1.0, 0.0}}, {"c", {0.0, 1.0}}, {"a", {0.0, 1.0}}, {"b", {0.0, 1.0}}});
  SimilarityIndex index(t);
  auto hits = top_k(index, "q", 2);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].vertex, "a");
  EXPECT_EQ(hits[1].vertex, "b");
}

TEST(TopK, TypeFilter) {
  auto t = table_of({{"a1", {1.0, 0.0}}, {"a2", {0.5, 0.5}}, {"p1", {1.0, 0.01}}, {"x", {1.0, 0.0}}});
  SimilarityIndex index(t, {{"a1", "A"}, {"a2", "A"}, {"p1", "P"}});
  auto hits = top_k(index, "a1", 10, std::string("A"));
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].vertex, "a2");
  EXPECT_TRUE(top_k(index, "a1", 10, std::string("V")).empty());
}

TEST(TopKProperty, MatchesBruteForce) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(199);
    auto t = oracle::random_table(rng, n, 1 + rng.below(32));
    std::unordered_map<std::string, std::string> types;
    std::map<std::string, std::string> types_sorted;
    for (const auto& name : t.names) {
      std::string ty = rng.below(2) ? "A" : "B";
      types[name] = ty;
      types_sorted[name] = ty;
    }
    SimilarityIndex index(t, types);
    for (int q = 0; q < 5; ++q) {
      const auto& query = t.names[rng.below(n)];
      const std::string* query_type = &types[query];
      for (const std::string* filter : {static_cast<const std::string*>(nullptr), query_type}) {
        auto expected = oracle::brute_force_rank(t, query, types_sorted, filter);
        for (std::size_t k : {std::size_t{1}, std::size_t{5}, n}) {
          auto opt = filter ? std::optional<std::string>(*filter) : std::nullopt;
          auto got = top_k(index, query, k, opt);
          auto serial = top_k_serial(index, query, k, opt);
          ASSERT_EQ(got, serial);
          ASSERT_EQ(got.size(), std::min(k, expected.size()));
          for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].vertex, expected[i].vertex);
            EXPECT_EQ(got[i].similarity, expected[i].similarity);
            if (filter) EXPECT_EQ(types[got[i].vertex], *filter);
          }
        }
      }
    }
  }
}

TEST(TopKProperty, ScaleInvariance) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto t = oracle::random_table(rng, 60, 8);
    auto scaled = t;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      // Powers of two keep the normalized vectors bit-identical.
      const double c = std::ldexp(1.0, static_cast<int>(rng.below(9)) - 4);
      for (auto& x : scaled.row(i)) x *= c;
    }
    SimilarityIndex a(t), b(scaled);
    for (int q = 0; q < 10; ++q) {
      const auto& query = t.names[rng.below(t.size())];
      auto ra = top_k(a, query, 60);
      auto rb = top_k(b, query, 60);
      ASSERT_EQ(ra.size(), rb.size());
      for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(ra[i].vertex, rb[i].vertex);
    }
  }
}

TEST(TopKProperty, ArbitraryPositiveScalingKeepsRankingUpToTies) {
  Rng rng(4);
  auto t = oracle::random_table(rng, 80, 6);
  auto scaled = t;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    const double c = rng.uniform(0.1, 10.0);
    for (auto& x : scaled.row(i)) x *= c;
  }
  SimilarityIndex a(t), b(scaled);
  for (std::size_t q = 0; q < t.size(); ++q) {
    auto ra = top_k(a, t.names[q], t.size());
    auto rb = top_k(b, t.names[q], t.size());
    for (std::size_t i = 0; i < ra.size(); ++i)
      EXPECT_NEAR(ra[i].similarity, rb[i].similarity, 1e-12);
  }
}

}  // namespace
}  // namespace mpembed
