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

// Random generators and brute-force oracles shared by the unit and
// acceptance tests. Nothing here calls into the code paths it checks.

#ifndef RELWMD_TESTS_TEST_SUPPORT_H_
#define RELWMD_TESTS_TEST_SUPPORT_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "relwmd/relwmd.h"

namespace relwmd::testing {

inline EmbeddingMatrix random_embeddings(std::size_t n, std::size_t d,
                                         std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> data(n * d);
  for (auto& v : data) v = g(rng);
  return EmbeddingMatrix(n, d, std::move(data));
}

inline EmbeddingMatrix embeddings_from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t d = rows.at(0).size();
  std::vector<double> data;
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return EmbeddingMatrix(rows.size(), d, std::move(data));
}

// Document with 1..max_words distinct words from [0, vocab) and counts in
// [1, max_count].
inline Document random_document(std::size_t vocab, std::size_t max_words,
                                std::uint64_t max_count, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> len(1, std::min(max_words, vocab));
  std::vector<WordId> ids(vocab);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  const std::size_t k = len(rng);
  std::uniform_int_distribution<std::uint64_t> cnt(1, max_count);
  std::vector<std::pair<WordId, std::uint64_t>> counts;
  for (std::size_t i = 0; i < k; ++i) counts.emplace_back(ids[i], cnt(rng));
  return Document::from_counts(std::move(counts));
}

// Document over exactly `len` distinct words.
inline Document random_document_exact(std::size_t vocab, std::size_t len,
                                      std::uint64_t max_count, std::mt19937_64& rng) {
  std::vector<WordId> ids(vocab);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::uniform_int_distribution<std::uint64_t> cnt(1, max_count);
  std::vector<std::pair<WordId, std::uint64_t>> counts;
  for (std::size_t i = 0; i < len; ++i) counts.emplace_back(ids[i], cnt(rng));
  return Document::from_counts(std::move(counts));
}

inline Document doc_of(std::vector<std::pair<WordId, std::uint64_t>> counts) {
  return Document::from_counts(std::move(counts));
}

inline double naive_distance(const EmbeddingMatrix& emb, WordId i, WordId j) {
  double s = 0.0;
  for (std::size_t k = 0; k < emb.dim(); ++k) {
    const double x = emb.row(i)[k];
    const double y = emb.row(j)[k];
    s += (x - y) * (x - y);
  }
  return std::sqrt(s);
}

// Exhaustive LP oracle. Every vertex of a transportation polytope is a
// basic solution supported on a spanning tree of the bipartite graph, so
// the optimum is the cheapest feasible spanning-tree solution. Flows on a
// tree are determined by peeling leaves; integral masses keep that exact.
// Requires a connected edge set with at most ~22 edges.
inline double brute_force_transport(const TransportInstance& inst) {
  const std::size_t m = inst.supplies.size();
  const std::size_t k = inst.demands.size();
  const std::size_t nodes = m + k;
  const std::size_t e_count = inst.edges.size();
  const std::size_t tree_size = nodes - 1;
  double best = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> chosen;
  std::vector<int> parent(nodes);
  std::vector<std::int64_t> mass(nodes);
  std::vector<int> degree(nodes);
  std::vector<char> alive;
  std::vector<std::int64_t> flow;

  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e_count); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != tree_size) continue;
    chosen.clear();
    for (std::size_t e = 0; e < e_count; ++e) {
      if (mask >> e & 1) chosen.push_back(e);
    }
    std::iota(parent.begin(), parent.end(), 0);
    bool acyclic = true;
    for (std::size_t e : chosen) {
      const int u = find(static_cast<int>(inst.edges[e].source));
      const int v = find(static_cast<int>(m + inst.edges[e].sink));
      if (u == v) {
        acyclic = false;
        break;
      }
      parent[u] = v;
    }
    if (!acyclic) continue;

    for (std::size_t i = 0; i < m; ++i) mass[i] = inst.supplies[i];
    for (std::size_t j = 0; j < k; ++j) mass[m + j] = inst.demands[j];
    std::fill(degree.begin(), degree.end(), 0);
    for (std::size_t e : chosen) {
      ++degree[inst.edges[e].source];
      ++degree[m + inst.edges[e].sink];
    }
    alive.assign(chosen.size(), 1);
    flow.assign(chosen.size(), 0);
    bool feasible = true;
    for (std::size_t step = 0; step < chosen.size() && feasible; ++step) {
      bool progressed = false;
      for (std::size_t t = 0; t < chosen.size(); ++t) {
        if (!alive[t]) continue;
        const std::size_t u = inst.edges[chosen[t]].source;
        const std::size_t v = m + inst.edges[chosen[t]].sink;
        std::size_t leaf;
        std::size_t other;
        if (degree[u] == 1) {
          leaf = u;
          other = v;
        } else if (degree[v] == 1) {
          leaf = v;
          other = u;
        } else {
          continue;
        }
        flow[t] = mass[leaf];
        if (flow[t] < 0) feasible = false;
        mass[other] -= flow[t];
        mass[leaf] = 0;
        --degree[u];
        --degree[v];
        alive[t] = 0;
        progressed = true;
        break;
      }
      if (!progressed) feasible = false;
    }
    if (!feasible) continue;
    if (std::any_of(mass.begin(), mass.end(), [](std::int64_t x) { return x != 0; })) continue;
    double cost = 0.0;
    for (std::size_t t = 0; t < chosen.size(); ++t) {
      cost += static_cast<double>(flow[t]) * inst.edges[chosen[t]].cost;
    }
    best = std::min(best, cost / static_cast<double>(inst.scale));
  }
  return best;
}

// Dense instance with an arbitrary per-pair cost function.
template <typename Cost>
TransportInstance dense_instance_with(const Document& a, const Document& b, Cost&& cost) {
  TransportInstance inst;
  inst.scale = static_cast<std::int64_t>(a.total() * b.total());
  for (auto c : a.counts()) inst.supplies.push_back(static_cast<std::int64_t>(c * b.total()));
  for (auto c : b.counts()) inst.demands.push_back(static_cast<std::int64_t>(c * a.total()));
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    for (std::uint32_t j = 0; j < b.size(); ++j) {
      inst.edges.push_back({i, j, cost(a.words()[i], b.words()[j])});
    }
  }
  return inst;
}

// Relaxed bound evaluated from scratch for an arbitrary cost function,
// applying the shared-word rule literally: for each shared pair the
// lighter side's mass is cancelled and the heavier side keeps its excess,
// matched to the nearest word other than itself.
template <typename Cost>
double relaxed_oracle(const Document& a, const Document& b, Cost&& cost, bool excess) {
  auto side = [&](const Document& x, const Document& y) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const WordId w = x.words()[i];
      double weight = static_cast<double>(x.counts()[i]) / static_cast<double>(x.total());
      bool skip_self = false;
      if (excess) {
        for (std::size_t j = 0; j < y.size(); ++j) {
          if (y.words()[j] != w) continue;
          const double other = static_cast<double>(y.counts()[j]) / static_cast<double>(y.total());
          weight = std::max(weight - other, 0.0);
          skip_self = true;
        }
      }
      if (weight <= 1e-15) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (skip_self && y.words()[j] == w) continue;
        best = std::min(best, cost(w, y.words()[j]));
      }
      if (std::isfinite(best)) total += weight * best;
    }
    return total;
  };
  return std::max(side(a, b), side(b, a));
}

// Top-r by full sort plus the mean of everything left out.
struct CacheOracle {
  std::vector<std::vector<Neighbor>> lists;
  double c_max = 0.0;
  std::uint64_t left_out = 0;
};

inline CacheOracle full_sort_cache(const EmbeddingMatrix& emb, std::size_t r) {
  CacheOracle out;
  const std::size_t n = emb.rows();
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Neighbor> row;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        row.push_back({static_cast<WordId>(j),
                       naive_distance(emb, static_cast<WordId>(i), static_cast<WordId>(j))});
      }
    }
    std::sort(row.begin(), row.end(), [](const Neighbor& x, const Neighbor& y) {
      return x.distance < y.distance || (x.distance == y.distance && x.word < y.word);
    });
    const std::size_t keep = std::min(r, row.size());
    for (std::size_t t = keep; t < row.size(); ++t) {
      sum += row[t].distance;
      ++out.left_out;
    }
    row.resize(keep);
    out.lists.push_back(std::move(row));
  }
  out.c_max = out.left_out ? static_cast<double>(sum / static_cast<long double>(out.left_out)) : 0.0;
  return out;
}

// Related-word cost for a pair under a cache (symmetric relation), without
// the c_max cap.
inline double related_cost(const RelatedCache& cache, WordId u, WordId v) {
  if (u == v) return 0.0;
  for (const auto& nb : cache.neighbors(u)) {
    if (nb.word == v) return nb.distance;
  }
  for (const auto& nb : cache.neighbors(v)) {
    if (nb.word == u) return nb.distance;
  }
  return cache.c_max();
}

}  // namespace relwmd::testing

#endif  // RELWMD_TESTS_TEST_SUPPORT_H_
