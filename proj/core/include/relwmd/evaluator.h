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

#ifndef RELWMD_EVALUATOR_H_
#define RELWMD_EVALUATOR_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "relwmd/cache.h"
#include "relwmd/corpus.h"
#include "relwmd/embeddings.h"
#include "relwmd/pull_matrix.h"

namespace relwmd {

enum class Metric {
  kWcd,
  kCosine,
  kWmd,
  kRwmd,
  kRwmdLinear,
  kRelWmd,
  kRelRwmd,
  kRelRwmdLinear,
};

std::optional<Metric> parse_metric(std::string_view name);
std::string_view metric_name(Metric m);
bool needs_cache(Metric m);
bool needs_embeddings(Metric m);

// Evaluates a metric between documents of one indexed collection. Linear
// metrics build their pull matrix at construction, which is the
// preprocessing phase of those methods.
class PairwiseEvaluator {
 public:
  struct Options {
    std::size_t pull_budget_bytes = kDefaultPullBudgetBytes;
    unsigned threads = 0;
  };

  // `docs`, `emb` and `cache` must outlive the evaluator. Throws
  // std::invalid_argument when a required resource is missing.
  PairwiseEvaluator(Metric metric, std::span<const Document> docs,
                    const EmbeddingMatrix* emb, const RelatedCache* cache,
                    Options options);
  PairwiseEvaluator(Metric metric, std::span<const Document> docs,
                    const EmbeddingMatrix* emb, const RelatedCache* cache)
      : PairwiseEvaluator(metric, docs, emb, cache, Options{}) {}
  ~PairwiseEvaluator();
  PairwiseEvaluator(PairwiseEvaluator&&) noexcept;
  PairwiseEvaluator& operator=(PairwiseEvaluator&&) noexcept;

  Metric metric() const { return metric_; }
  std::size_t size() const { return docs_.size(); }

  double operator()(std::size_t a, std::size_t b) const;

 private:
  Metric metric_;
  std::span<const Document> docs_;
  const EmbeddingMatrix* emb_;
  const RelatedCache* cache_;
  std::unique_ptr<DensePullMatrix> dense_;
  std::unique_ptr<SparsePullMatrix> sparse_;
};

}  // namespace relwmd

#endif  // RELWMD_EVALUATOR_H_
