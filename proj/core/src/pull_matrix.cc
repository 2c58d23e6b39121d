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

#include "relwmd/pull_matrix.h"

#include <algorithm>
#include <cmath>

#include "relaxed_terms.h"
#include "relwmd/parallel.h"

namespace relwmd {

DensePullMatrix::DensePullMatrix(std::span<const Document> docs,
                                 const EmbeddingMatrix& emb,
                                 std::size_t budget_bytes, unsigned threads)
    : rows_(docs.size()), cols_(emb.rows()) {
  if (docs.empty()) throw std::invalid_argument("pull matrix over an empty collection");
  const double bytes = static_cast<double>(rows_) * static_cast<double>(cols_) * sizeof(double);
  if (bytes > static_cast<double>(budget_bytes)) {
    throw BudgetError("dense pull matrix needs " + std::to_string(rows_) + " x " +
                      std::to_string(cols_) + " doubles (" +
                      std::to_string(static_cast<long long>(bytes / (1 << 20))) +
                      " MiB), over the budget of " +
                      std::to_string(budget_bytes >> 20) + " MiB");
  }
  data_.assign(rows_ * cols_, kNoSecond);
  parallel_for(rows_, threads, [&](std::size_t r) {
    const Document& doc = docs[r];
    double* out = data_.data() + r * cols_;
    for (std::size_t v = 0; v < cols_; ++v) {
      const auto xv = emb.row(static_cast<WordId>(v));
      double best = kNoSecond;
      for (WordId w : doc.words()) {
        if (w == v) continue;
        best = std::min(best, std::sqrt(squared_distance(xv, emb.row(w))));
      }
      out[v] = best;
    }
  });
}

double rwmd_linear(const DensePullMatrix& m, const Document& a, const Document& b,
                   std::size_t row_a, std::size_t row_b, LookupStats* stats) {
  const ExcessAdjustment adj = shared_word_excess(a, b);
  std::size_t reads = 0;
  const double l = internal::weighted_minimum_sum(adj.source_weights, [&](std::size_t i) {
    ++reads;
    return m.at(row_b, a.words()[i]);
  });
  const double r = internal::weighted_minimum_sum(adj.sink_weights, [&](std::size_t j) {
    ++reads;
    return m.at(row_a, b.words()[j]);
  });
  if (stats) stats->row_reads += reads;
  return std::max(l, r);
}

SparsePullMatrix::SparsePullMatrix(std::span<const Document> docs,
                                   const RelatedCache& cache, unsigned threads)
    : c_max_(cache.c_max()), rows_(docs.size()) {
  if (docs.empty()) throw std::invalid_argument("pull matrix over an empty collection");
  parallel_for(docs.size(), threads, [&](std::size_t r) {
    auto& row = rows_[r];
    auto scatter = [&](const Neighbor& nb) {
      if (nb.distance > c_max_) return;
      auto [it, inserted] = row.try_emplace(nb.word, nb.distance);
      if (!inserted) it->second = std::min(it->second, nb.distance);
    };
    for (WordId w : docs[r].words()) {
      for (const auto& nb : cache.neighbors(w)) scatter(nb);
      for (const auto& nb : cache.reverse_neighbors(w)) scatter(nb);
    }
  });
}

double rel_rwmd_linear(const SparsePullMatrix& m, const Document& a,
                       const Document& b, std::size_t row_a, std::size_t row_b,
                       LookupStats* stats) {
  const ExcessAdjustment adj = shared_word_excess(a, b);
  std::size_t reads = 0;
  const double l = internal::weighted_minimum_sum(adj.source_weights, [&](std::size_t i) {
    ++reads;
    return m.read(row_b, a.words()[i]);
  });
  const double r = internal::weighted_minimum_sum(adj.sink_weights, [&](std::size_t j) {
    ++reads;
    return m.read(row_a, b.words()[j]);
  });
  if (stats) stats->row_reads += reads;
  return std::max(l, r);
}

}  // namespace relwmd
