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

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "relwmd/parallel.h"

namespace relwmd {

namespace {

struct Partial {
  double sum = 0.0;
  std::uint64_t count = 0;
};

// Keeps the r closest candidates sorted in `row` and returns the sum and
// count of the rest.
Partial select_top(std::vector<Neighbor>& row, std::size_t r) {
  Partial leftover;
  if (row.size() > r) {
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(r),
                     row.end(), closer);
    for (std::size_t t = r; t < row.size(); ++t) leftover.sum += row[t].distance;
    leftover.count = row.size() - r;
    row.resize(r);
  }
  std::sort(row.begin(), row.end(), closer);
  return leftover;
}

void check_build_args(const EmbeddingMatrix& emb, std::size_t r) {
  if (r == 0) throw std::invalid_argument("cache: r must be >= 1");
  if (emb.rows() < 2) throw std::invalid_argument("cache: need at least 2 words");
}

// Sums per-word partials in word order so the result does not depend on
// the thread count.
CacheInfo merge(std::span<const Partial> partials) {
  CacheInfo info;
  for (const auto& p : partials) {
    info.accumulated_sum += p.sum;
    info.accumulated_count += p.count;
  }
  return info;
}

double finish_c_max(const std::vector<std::vector<Neighbor>>& lists, CacheInfo& info) {
  const std::uint64_t count = info.accumulated_count + info.sampled_count;
  if (count > 0) {
    return (info.accumulated_sum + info.sampled_sum) / static_cast<double>(count);
  }
  info.c_max_fallback = true;
  double best = 0.0;
  for (const auto& l : lists) {
    for (const auto& nb : l) best = std::max(best, nb.distance);
  }
  return best;
}

}  // namespace

RelatedCache::RelatedCache(std::size_t r, std::vector<std::vector<Neighbor>> lists,
                           double c_max, CacheInfo info)
    : r_(r), c_max_(c_max), info_(info) {
  const std::size_t n = lists.size();
  offsets_.assign(n + 1, 0);
  std::vector<std::size_t> in_degree(n, 0);
  for (std::size_t w = 0; w < n; ++w) {
    offsets_[w + 1] = offsets_[w] + lists[w].size();
    for (const auto& nb : lists[w]) {
      if (nb.word >= n) throw std::invalid_argument("cache: neighbor id out of range");
      ++in_degree[nb.word];
    }
  }
  entries_.reserve(offsets_[n]);
  for (auto& l : lists) entries_.insert(entries_.end(), l.begin(), l.end());

  reverse_offsets_.assign(n + 1, 0);
  for (std::size_t w = 0; w < n; ++w) reverse_offsets_[w + 1] = reverse_offsets_[w] + in_degree[w];
  reverse_entries_.resize(entries_.size());
  std::vector<std::size_t> fill(reverse_offsets_.begin(), reverse_offsets_.end() - 1);
  for (std::size_t w = 0; w < n; ++w) {
    for (const auto& nb : neighbors(static_cast<WordId>(w))) {
      reverse_entries_[fill[nb.word]++] = Neighbor{static_cast<WordId>(w), nb.distance};
    }
  }
}

RelatedCache build_cache_exact(const EmbeddingMatrix& emb, std::size_t r,
                               unsigned threads) {
  check_build_args(emb, r);
  const std::size_t n = emb.rows();
  std::vector<std::vector<Neighbor>> lists(n);
  std::vector<Partial> partials(n);

  parallel_for(n, threads, [&](std::size_t i) {
    const auto xi = emb.row(static_cast<WordId>(i));
    std::vector<Neighbor> row;
    row.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      row.push_back({static_cast<WordId>(j),
                     std::sqrt(squared_distance(xi, emb.row(static_cast<WordId>(j))))});
    }
    partials[i] = select_top(row, r);
    lists[i] = std::move(row);
  });

  CacheInfo info = merge(partials);
  const double c_max = finish_c_max(lists, info);
  return RelatedCache(r, std::move(lists), c_max, info);
}

RelatedCache build_cache_clustered(const EmbeddingMatrix& emb, std::size_t r,
                                   unsigned iters, std::uint64_t seed,
                                   unsigned threads) {
  check_build_args(emb, r);
  const std::size_t n = emb.rows();
  const std::size_t k = clustered_cluster_count(n, iters);
  const ClusterAssignment clusters = kmeans(emb, k, std::max(1u, iters), seed);

  std::vector<std::vector<WordId>> members(k);
  for (std::size_t i = 0; i < n; ++i) {
    members[clusters.assign[i]].push_back(static_cast<WordId>(i));
  }

  std::vector<std::vector<Neighbor>> lists(n);
  std::vector<Partial> partials(n);
  parallel_for(k, threads, [&](std::size_t c) {
    const auto& group = members[c];
    for (WordId i : group) {
      const auto xi = emb.row(i);
      std::vector<Neighbor> row;
      row.reserve(group.size());
      for (WordId j : group) {
        if (j == i) continue;
        row.push_back({j, std::sqrt(squared_distance(xi, emb.row(j)))});
      }
      partials[i] = select_top(row, r);
      lists[i] = std::move(row);
    }
  });

  CacheInfo info = merge(partials);
  info.clustered = true;
  info.k = k;
  info.kmeans_iters = iters;
  info.seed = seed;

  std::uint64_t same_cluster = 0;
  for (const auto& g : members) same_cluster += static_cast<std::uint64_t>(g.size()) * g.size();
  const std::uint64_t cross = static_cast<std::uint64_t>(n) * n - same_cluster;
  const std::uint64_t samples = std::min(kCrossClusterSampleCap, cross);
  if (samples > 0) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::uint64_t s = 0; s < samples;) {
      const auto i = static_cast<WordId>(pick(rng));
      const auto j = static_cast<WordId>(pick(rng));
      if (clusters.assign[i] == clusters.assign[j]) continue;
      info.sampled_sum += std::sqrt(squared_distance(emb.row(i), emb.row(j)));
      ++s;
    }
    info.sampled_count = samples;
  }

  const double c_max = finish_c_max(lists, info);
  return RelatedCache(r, std::move(lists), c_max, info);
}

std::vector<Neighbor> related_in(const RelatedCache& cache, WordId w,
                                 const Document& doc) {
  if (w >= cache.num_words()) throw std::out_of_range("related_in: word id out of range");
  std::vector<Neighbor> out;
  for (const auto& nb : cache.neighbors(w)) {
    if (doc.contains(nb.word)) out.push_back(nb);
  }
  return out;
}

}  // namespace relwmd
