// Copyright 2026 The relwmd Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relwmd/cache.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "test_support.h"

namespace relwmd {
namespace {

using ::relwmd::testing::full_sort_cache;
using ::relwmd::testing::naive_distance;
using ::relwmd::testing::random_embeddings;

std::vector<Neighbor> as_vector(std::span<const Neighbor> s) { return {s.begin(), s.end()}; }

TEST(ExactCache, ThreePointsOnALine) {
  const EmbeddingMatrix m(3, 1, {0.0, 1.0, 10.0});
  const RelatedCache c = build_cache_exact(m, 1, 1);
  EXPECT_EQ(as_vector(c.neighbors(0)), (std::vector<Neighbor>{{1, 1.0}}));
  EXPECT_EQ(as_vector(c.neighbors(1)), (std::vector<Neighbor>{{0, 1.0}}));
  EXPECT_EQ(as_vector(c.neighbors(2)), (std::vector<Neighbor>{{1, 9.0}}));
  EXPECT_NEAR(c.c_max(), 29.0 / 3.0, 1e-15);
  EXPECT_FALSE(c.info().c_max_fallback);
  EXPECT_EQ(c.info().accumulated_count, 3u);
}

TEST(ExactCache, TwoWordsFallsBack) {
  const EmbeddingMatrix m(2, 2, {0.0, 0.0, 3.0, 4.0});
  const RelatedCache c = build_cache_exact(m, 1, 1);
  EXPECT_EQ(as_vector(c.neighbors(0)), (std::vector<Neighbor>{{1, 5.0}}));
  EXPECT_EQ(as_vector(c.neighbors(1)), (std::vector<Neighbor>{{0, 5.0}}));
  EXPECT_TRUE(c.info().c_max_fallback);
  EXPECT_EQ(c.c_max(), 5.0);
}

TEST(ExactCache, RejectsBadArguments) {
  const EmbeddingMatrix one(1, 1, {0.0});
  EXPECT_THROW(build_cache_exact(one, 1), std::invalid_argument);
  const EmbeddingMatrix two(2, 1, {0.0, 1.0});
  EXPECT_THROW(build_cache_exact(two, 0), std::invalid_argument);
}

TEST(ExactCache, MatchesFullSortOracle) {
  std::mt19937_64 rng(21);
  for (std::size_t n : {5u, 37u, 120u}) {
    const EmbeddingMatrix m = random_embeddings(n, 8, rng);
    for (std::size_t r : {1u, 4u, 16u}) {
      const RelatedCache c = build_cache_exact(m, r, 2);
      const auto oracle = full_sort_cache(m, r);
      ASSERT_EQ(c.num_words(), n);
      for (WordId w = 0; w < n; ++w) {
        const auto got = c.neighbors(w);
        ASSERT_EQ(got.size(), oracle.lists[w].size());
        for (std::size_t t = 0; t < got.size(); ++t) {
          EXPECT_EQ(got[t].word, oracle.lists[w][t].word);
          EXPECT_NEAR(got[t].distance, oracle.lists[w][t].distance, 1e-12);
        }
      }
      if (oracle.left_out > 0) {
        EXPECT_NEAR(c.c_max(), oracle.c_max, 1e-9 * oracle.c_max);
        EXPECT_EQ(c.info().accumulated_count, oracle.left_out);
      } else {
        EXPECT_TRUE(c.info().c_max_fallback);
      }
    }
  }
}

TEST(ExactCache, ListsHaveNoSelfAndBoundedLength) {
  std::mt19937_64 rng(22);
  const EmbeddingMatrix m = random_embeddings(50, 5, rng);
  const RelatedCache c = build_cache_exact(m, 7, 1);
  for (WordId w = 0; w < 50; ++w) {
    ASSERT_EQ(c.neighbors(w).size(), 7u);
    for (const auto& nb : c.neighbors(w)) {
      EXPECT_NE(nb.word, w);
      EXPECT_NEAR(nb.distance, naive_distance(m, w, nb.word), 1e-12);
    }
  }
}

TEST(ExactCache, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(23);
  const EmbeddingMatrix m = random_embeddings(80, 6, rng);
  EXPECT_EQ(build_cache_exact(m, 5, 1), build_cache_exact(m, 5, 4));
}

TEST(ExactCache, ReverseIndexMirrorsLists) {
  std::mt19937_64 rng(24);
  const EmbeddingMatrix m = random_embeddings(40, 3, rng);
  const RelatedCache c = build_cache_exact(m, 3, 1);
  std::size_t total = 0;
  for (WordId v = 0; v < 40; ++v) {
    for (const auto& back : c.reverse_neighbors(v)) {
      const auto list = c.neighbors(back.word);
      EXPECT_NE(std::find(list.begin(), list.end(), Neighbor{v, back.distance}), list.end());
      ++total;
    }
  }
  EXPECT_EQ(total, c.total_entries());
}

TEST(RelatedIn, Examples) {
  const RelatedCache c(3, {{{1, 0.5}, {2, 0.7}, {3, 0.9}}, {}, {}, {}, {}}, 2.0);
  EXPECT_TRUE(related_in(c, 0, Document::from_counts({{4, 1}})).empty());
  EXPECT_EQ(related_in(c, 0, Document::from_counts({{1, 1}, {2, 1}, {3, 1}, {4, 1}})),
            (std::vector<Neighbor>{{1, 0.5}, {2, 0.7}, {3, 0.9}}));
  EXPECT_EQ(related_in(c, 0, Document::from_counts({{2, 5}})),
            (std::vector<Neighbor>{{2, 0.7}}));
  EXPECT_THROW(related_in(c, 9, Document::from_counts({{2, 5}})), std::out_of_range);
}

TEST(CacheIo, RoundTripAndDeterministicBytes) {
  std::mt19937_64 rng(25);
  const EmbeddingMatrix m = random_embeddings(60, 4, rng);
  const RelatedCache c = build_cache_clustered(m, 4, 5, 9, 1);
  std::ostringstream a;
  write_cache(a, c);
  std::ostringstream b;
  write_cache(b, build_cache_clustered(m, 4, 5, 9, 2));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  EXPECT_EQ(read_cache(in), c);
}

TEST(CacheIo, RejectsGarbage) {
  std::istringstream bad("not a cache");
  EXPECT_THROW(read_cache(bad), ParseError);
  const EmbeddingMatrix m(3, 1, {0.0, 1.0, 10.0});
  std::ostringstream out;
  write_cache(out, build_cache_exact(m, 1, 1));
  std::string bytes = out.str();
  bytes.resize(bytes.size() - 3);
  std::istringstream truncated(bytes);
  EXPECT_THROW(read_cache(truncated), ParseError);
}

TEST(CacheIo, TextDump) {
  const EmbeddingMatrix m(3, 1, {0.0, 1.0, 10.0});
  const Vocabulary v({"a", "b", "c"});
  std::ostringstream out;
  dump_cache_text(out, build_cache_exact(m, 1, 1), &v);
  EXPECT_NE(out.str().find("c"), std::string::npos);
  EXPECT_NE(out.str().find("b"), std::string::npos);
}

TEST(ClusteredCache, ClusterCount) {
  EXPECT_EQ(clustered_cluster_count(415967, 5), 289u);
  EXPECT_EQ(clustered_cluster_count(260640, 5), 229u);
  EXPECT_EQ(clustered_cluster_count(5, 5), 1u);
  EXPECT_EQ(clustered_cluster_count(3, 5), 1u);
}

TEST(ClusteredCache, SingleClusterEqualsExact) {
  std::mt19937_64 rng(26);
  const EmbeddingMatrix m = random_embeddings(5, 3, rng);
  const RelatedCache exact = build_cache_exact(m, 2, 1);
  const RelatedCache clustered = build_cache_clustered(m, 2, 5, 3, 1);
  EXPECT_EQ(clustered.info().k, 1u);
  EXPECT_EQ(clustered.c_max(), exact.c_max());
  for (WordId w = 0; w < 5; ++w) {
    EXPECT_EQ(as_vector(clustered.neighbors(w)), as_vector(exact.neighbors(w)));
  }
}

TEST(ClusteredCache, ListsAreSoundAndNeverCloserThanExact) {
  std::mt19937_64 rng(27);
  const EmbeddingMatrix m = random_embeddings(150, 6, rng);
  const RelatedCache exact = build_cache_exact(m, 4, 1);
  const RelatedCache c = build_cache_clustered(m, 4, 5, 1, 1);
  EXPECT_GT(c.info().k, 1u);
  EXPECT_GT(c.info().sampled_count, 0u);
  const ClusterAssignment km = kmeans(m, c.info().k, 5, 1);
  for (WordId w = 0; w < 150; ++w) {
    const auto list = c.neighbors(w);
    EXPECT_LE(list.size(), 4u);
    for (std::size_t t = 0; t < list.size(); ++t) {
      EXPECT_NE(list[t].word, w);
      EXPECT_EQ(km.assign[list[t].word], km.assign[w]);
      EXPECT_NEAR(list[t].distance, naive_distance(m, w, list[t].word), 1e-12);
      if (t > 0) EXPECT_TRUE(closer(list[t - 1], list[t]));
      EXPECT_GE(list[t].distance, exact.neighbors(w)[t].distance);
    }
  }
  EXPECT_GT(c.c_max(), 0.0);
}

TEST(ClusteredCache, SameSeedSameCache) {
  std::mt19937_64 rng(28);
  const EmbeddingMatrix m = random_embeddings(100, 4, rng);
  EXPECT_EQ(build_cache_clustered(m, 3, 5, 7, 1), build_cache_clustered(m, 3, 5, 7, 3));
}

}  // namespace
}  // namespace relwmd
