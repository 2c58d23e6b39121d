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

#ifndef RELWMD_EVAL_H_
#define RELWMD_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relwmd/cache.h"
#include "relwmd/corpus.h"
#include "relwmd/embeddings.h"
#include "relwmd/evaluator.h"

namespace relwmd {

struct KnnConfig {
  std::size_t k = 19;
  Metric metric = Metric::kRelRwmdLinear;
  std::vector<std::size_t> r_grid = {1, 2, 4, 8, 16, 32, 64, 128};
  std::size_t folds = 5;
  // Absolute percentage points above the best CV error that still count
  // as acceptable when picking the smallest r.
  double cv_slack = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t pull_budget_bytes = kDefaultPullBudgetBytes;

  // Throws std::invalid_argument.
  void validate() const;
};

struct EvalReport {
  double test_error = 0.0;  // percent
  std::size_t evaluated = 0;
  std::size_t failures = 0;
  // confusion[true_class][predicted_class]; empty for triplets.
  std::vector<std::vector<std::size_t>> confusion;
  double preprocess_seconds = 0.0;
  double eval_seconds = 0.0;
  double selection_seconds = 0.0;
  std::optional<std::size_t> chosen_r;
  std::vector<std::pair<std::size_t, double>> cv_errors;
  std::vector<std::string> warnings;
};

// Votes among the nearest candidates. Candidates are ranked by ascending
// distance, ties broken by lower index. When several classes share the
// top count, k is halved (rounding down) and the vote repeats over the
// shorter prefix; k = 1 always has a unique winner.
ClassId knn_vote(std::span<const double> distances, std::span<const ClassId> labels,
                 std::size_t k);

using DocumentDistance = std::function<double(const Document&, const Document&)>;

ClassId knn_classify(const Document& query, const Corpus& train,
                     const DocumentDistance& dist, std::size_t k);

// Splits indices into `folds` groups. Each class is shuffled with the seed
// and dealt round-robin, so class proportions are preserved.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const ClassId> labels,
                                                       std::size_t folds,
                                                       std::uint64_t seed);

// Smallest r whose error is within `slack` of the minimum. `cv_errors` is
// (r, error percent), in any order.
std::size_t choose_r(std::span<const std::pair<std::size_t, double>> cv_errors,
                     double slack);

using CacheBuilder = std::function<RelatedCache(std::size_t r)>;

struct RSelection {
  std::size_t r = 0;
  std::vector<std::pair<std::size_t, double>> cv_errors;
  std::vector<std::string> warnings;
};

// Cross-validated choice of r for a cache-based metric (cfg.metric).
RSelection select_r(const Corpus& train, const KnnConfig& cfg,
                    const CacheBuilder& cache_builder);

// k-NN classification of every test document against the training set.
// Cache-based metrics use `fixed_r` when given and otherwise select r by
// cross-validation on the training set; that selection is reported in
// selection_seconds and excluded from preprocess_seconds.
EvalReport run_classification(const Corpus& train, const Corpus& test,
                              const KnnConfig& cfg, const EmbeddingMatrix* emb,
                              const CacheBuilder& cache_builder,
                              std::optional<std::size_t> fixed_r);

using PairDistance = std::function<double(std::size_t, std::size_t)>;

// A triplet succeeds when dist(a, b) < dist(a, c); ties fail.
EvalReport run_triplets(const TripletSet& triplets, std::size_t num_docs,
                        const PairDistance& dist, unsigned threads = 0);

}  // namespace relwmd

#endif  // RELWMD_EVAL_H_
