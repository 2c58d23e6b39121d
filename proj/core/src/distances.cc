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

#include "relwmd/distances.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaxed_terms.h"
#include "relwmd/flow.h"

namespace relwmd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

__extension__ using Wide = __int128;

void require_nonempty(const Document& a, const Document& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("distance of an empty document");
}

}  // namespace

double wcd(const Document& a, const Document& b, const EmbeddingMatrix& emb) {
  require_nonempty(a, b);
  const std::size_t d = emb.dim();
  auto centroid = [&](const Document& doc) {
    std::vector<double> c(d, 0.0);
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const auto x = emb.row(doc.words()[i]);
      for (std::size_t t = 0; t < d; ++t) c[t] += doc.weights()[i] * x[t];
    }
    return c;
  };
  const auto ca = centroid(a);
  const auto cb = centroid(b);
  double s = 0.0;
  for (std::size_t t = 0; t < d; ++t) s += (ca[t] - cb[t]) * (ca[t] - cb[t]);
  return std::sqrt(s);
}

double cosine(const Document& a, const Document& b) {
  require_nonempty(a, b);
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a.words()[i] < b.words()[j]) {
      ++i;
    } else if (b.words()[j] < a.words()[i]) {
      ++j;
    } else {
      dot += a.weights()[i++] * b.weights()[j++];
    }
  }
  double na = 0.0;
  double nb = 0.0;
  for (double w : a.weights()) na += w * w;
  for (double w : b.weights()) nb += w * w;
  const double sim = dot / std::sqrt(na * nb);
  return std::clamp(1.0 - sim, 0.0, 2.0);
}

double wmd(const Document& a, const Document& b, const EmbeddingMatrix& emb) {
  require_nonempty(a, b);
  return solve_transport(build_dense(a, b, emb)).objective;
}

ExcessAdjustment shared_word_excess(const Document& a, const Document& b) {
  require_nonempty(a, b);
  ExcessAdjustment adj;
  adj.source_weights.assign(a.weights().begin(), a.weights().end());
  adj.sink_weights.assign(b.weights().begin(), b.weights().end());
  adj.source_excluded.assign(a.size(), std::nullopt);
  adj.sink_excluded.assign(b.size(), std::nullopt);

  // D_i - D'_j = (c_i * T' - c'_j * T) / (T * T'), compared exactly.
  const auto total_a = static_cast<Wide>(a.total());
  const auto total_b = static_cast<Wide>(b.total());
  const double scale = static_cast<double>(a.total()) * static_cast<double>(b.total());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto pos = b.position(a.words()[i]);
    if (!pos) continue;
    const std::size_t j = *pos;
    const Wide diff = static_cast<Wide>(a.counts()[i]) * total_b -
                    static_cast<Wide>(b.counts()[j]) * total_a;
    adj.source_weights[i] = diff > 0 ? static_cast<double>(diff) / scale : 0.0;
    adj.sink_weights[j] = diff < 0 ? static_cast<double>(-diff) / scale : 0.0;
    if (diff >= 0) adj.source_excluded[i] = static_cast<std::uint32_t>(j);  // D'_j <= D_i
    if (diff <= 0) adj.sink_excluded[j] = static_cast<std::uint32_t>(i);    // D_i <= D'_j
  }
  return adj;
}

double rwmd_standard(const Document& a, const Document& b,
                     const EmbeddingMatrix& emb, bool excess) {
  require_nonempty(a, b);
  ExcessAdjustment adj;
  if (excess) {
    adj = shared_word_excess(a, b);
  } else {
    adj.source_weights.assign(a.weights().begin(), a.weights().end());
    adj.sink_weights.assign(b.weights().begin(), b.weights().end());
    adj.source_excluded.assign(a.size(), std::nullopt);
    adj.sink_excluded.assign(b.size(), std::nullopt);
  }

  std::vector<double> left(a.size(), kInf);
  std::vector<double> right(b.size(), kInf);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto xi = emb.row(a.words()[i]);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double c = std::sqrt(squared_distance(xi, emb.row(b.words()[j])));
      if (adj.source_excluded[i] != j) left[i] = std::min(left[i], c);
      if (adj.sink_excluded[j] != i) right[j] = std::min(right[j], c);
    }
  }
  const double l = internal::weighted_minimum_sum(adj.source_weights,
                                                  [&](std::size_t i) { return left[i]; });
  const double r = internal::weighted_minimum_sum(adj.sink_weights,
                                                  [&](std::size_t j) { return right[j]; });
  return std::max(l, r);
}

double rel_wmd(const Document& a, const Document& b, const RelatedCache& cache) {
  require_nonempty(a, b);
  return solve_transport(build_compact(a, b, cache)).objective;
}

double rel_rwmd_standard(const Document& a, const Document& b,
                         const RelatedCache& cache, LookupStats* stats) {
  require_nonempty(a, b);
  const ExcessAdjustment adj = shared_word_excess(a, b);
  const double c_max = cache.c_max();
  std::vector<double> left(a.size(), c_max);
  std::vector<double> right(b.size(), c_max);
  std::size_t probes = 0;

  // Related pairs are discovered from either side's list; each hit
  // tightens both minima. The cache holds no self pairs, so a shared word
  // never matches itself here.
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const auto& nb : cache.neighbors(a.words()[i])) {
      ++probes;
      if (auto j = b.position(nb.word)) {
        left[i] = std::min(left[i], nb.distance);
        right[*j] = std::min(right[*j], nb.distance);
      }
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (const auto& nb : cache.neighbors(b.words()[j])) {
      ++probes;
      if (auto i = a.position(nb.word)) {
        right[j] = std::min(right[j], nb.distance);
        left[*i] = std::min(left[*i], nb.distance);
      }
    }
  }
  if (stats) stats->membership_probes += probes;

  const double l = internal::weighted_minimum_sum(adj.source_weights,
                                                  [&](std::size_t i) { return left[i]; });
  const double r = internal::weighted_minimum_sum(adj.sink_weights,
                                                  [&](std::size_t j) { return right[j]; });
  return std::max(l, r);
}

}  // namespace relwmd
