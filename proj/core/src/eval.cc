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

#include "relwmd/eval.h"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "relwmd/parallel.h"

namespace relwmd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t class_count(std::span<const ClassId> labels) {
  ClassId top = 0;
  for (auto c : labels) top = std::max(top, c);
  return labels.empty() ? 0 : static_cast<std::size_t>(top) + 1;
}

// Full symmetric distance matrix over one collection.
std::vector<double> pairwise_matrix(const PairwiseEvaluator& eval, unsigned threads) {
  const std::size_t n = eval.size();
  std::vector<double> out(n * n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) out[i * n + j] = eval(i, j);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) out[i * n + j] = out[j * n + i];
  }
  return out;
}

}  // namespace

void KnnConfig::validate() const {
  if (k == 0) throw std::invalid_argument("knn: k must be >= 1");
  if (folds < 2) throw std::invalid_argument("knn: folds must be >= 2");
  if (r_grid.empty()) throw std::invalid_argument("knn: r grid is empty");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (r_grid[i] == 0 || (i > 0 && r_grid[i] <= r_grid[i - 1])) {
      throw std::invalid_argument("knn: r grid must be positive and strictly ascending");
    }
  }
  if (cv_slack < 0.0) throw std::invalid_argument("knn: cv slack must be >= 0");
}

ClassId knn_vote(std::span<const double> distances, std::span<const ClassId> labels,
                 std::size_t k) {
  if (distances.empty() || distances.size() != labels.size()) {
    throw std::invalid_argument("knn: need one label per candidate and at least one candidate");
  }
  if (k == 0) throw std::invalid_argument("knn: k must be >= 1");
  std::size_t kk = std::min(k, distances.size());
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                    [&](std::size_t x, std::size_t y) {
                      return distances[x] < distances[y] ||
                             (distances[x] == distances[y] && x < y);
                    });

  std::vector<std::size_t> votes(class_count(labels), 0);
  for (;;) {
    std::fill(votes.begin(), votes.end(), 0);
    for (std::size_t t = 0; t < kk; ++t) ++votes[labels[order[t]]];
    const auto best = std::max_element(votes.begin(), votes.end());
    if (std::count(votes.begin(), votes.end(), *best) == 1 || kk == 1) {
      return static_cast<ClassId>(best - votes.begin());
    }
    kk /= 2;
  }
}

ClassId knn_classify(const Document& query, const Corpus& train,
                     const DocumentDistance& dist, std::size_t k) {
  if (train.docs.empty()) throw std::invalid_argument("knn: empty training set");
  if (!train.labeled()) throw std::invalid_argument("knn: training set has no labels");
  std::vector<double> d(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) d[i] = dist(query, train.docs[i]);
  return knn_vote(d, train.labels, k);
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const ClassId> labels,
                                                       std::size_t folds,
                                                       std::uint64_t seed) {
  if (folds == 0) throw std::invalid_argument("folds must be >= 1");
  std::vector<std::vector<std::size_t>> by_class(class_count(labels));
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t slot = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i : members) out[slot++ % folds].push_back(i);
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

std::size_t choose_r(std::span<const std::pair<std::size_t, double>> cv_errors,
                     double slack) {
  if (cv_errors.empty()) throw std::invalid_argument("choose_r: no candidates");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [r, err] : cv_errors) best = std::min(best, err);
  std::size_t chosen = std::numeric_limits<std::size_t>::max();
  for (const auto& [r, err] : cv_errors) {
    if (err <= best + slack) chosen = std::min(chosen, r);
  }
  return chosen;
}

RSelection select_r(const Corpus& train, const KnnConfig& cfg,
                    const CacheBuilder& cache_builder) {
  cfg.validate();
  if (!needs_cache(cfg.metric)) {
    throw std::invalid_argument("select_r: metric does not use a related-word cache");
  }
  if (!train.labeled()) throw std::invalid_argument("select_r: training set has no labels");
  if (train.size() < cfg.folds) {
    throw std::invalid_argument("select_r: fewer training documents than folds");
  }
  RSelection out;
  const auto folds = stratified_folds(train.labels, cfg.folds, cfg.seed);
  const std::size_t classes = class_count(train.labels);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<char> seen(classes, 0);
    for (std::size_t i : folds[f]) seen[train.labels[i]] = 1;
    if (std::count(seen.begin(), seen.end(), 0) > 0) {
      out.warnings.push_back("fold " + std::to_string(f) + " is missing at least one class");
    }
  }
  std::vector<std::size_t> fold_of(train.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (std::size_t i : folds[f]) fold_of[i] = f;
  }

  const std::size_t n = train.size();
  for (std::size_t r : cfg.r_grid) {
    const RelatedCache cache = cache_builder(r);
    const PairwiseEvaluator eval(cfg.metric, train.docs, nullptr, &cache,
                                 {cfg.pull_budget_bytes, cfg.threads});
    const auto dist = pairwise_matrix(eval, cfg.threads);

    std::size_t wrong = 0;
    std::vector<double> d;
    std::vector<ClassId> lab;
    for (std::size_t q = 0; q < n; ++q) {
      d.clear();
      lab.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (fold_of[i] == fold_of[q]) continue;
        d.push_back(dist[q * n + i]);
        lab.push_back(train.labels[i]);
      }
      if (knn_vote(d, lab, cfg.k) != train.labels[q]) ++wrong;
    }
    out.cv_errors.emplace_back(r, 100.0 * static_cast<double>(wrong) / static_cast<double>(n));
  }
  out.r = choose_r(out.cv_errors, cfg.cv_slack);
  return out;
}

EvalReport run_classification(const Corpus& train, const Corpus& test,
                              const KnnConfig& cfg, const EmbeddingMatrix* emb,
                              const CacheBuilder& cache_builder,
                              std::optional<std::size_t> fixed_r) {
  cfg.validate();
  if (!train.labeled() || !test.labeled()) {
    throw std::invalid_argument("classification needs labeled train and test sets");
  }
  if (train.docs.empty()) throw std::invalid_argument("knn: empty training set");
  EvalReport report;

  std::optional<RelatedCache> cache;
  auto preprocess_start = Clock::now();
  if (needs_cache(cfg.metric)) {
    if (!cache_builder) throw std::invalid_argument("knn: cache metric without a cache builder");
    if (fixed_r) {
      report.chosen_r = *fixed_r;
    } else {
      const auto sel_start = Clock::now();
      RSelection sel = select_r(train, cfg, cache_builder);
      report.selection_seconds = seconds_since(sel_start);
      report.chosen_r = sel.r;
      report.cv_errors = std::move(sel.cv_errors);
      report.warnings = std::move(sel.warnings);
    }
    preprocess_start = Clock::now();
    cache = cache_builder(*report.chosen_r);
  }

  std::vector<Document> all;
  all.reserve(train.size() + test.size());
  all.insert(all.end(), train.docs.begin(), train.docs.end());
  all.insert(all.end(), test.docs.begin(), test.docs.end());
  const PairwiseEvaluator eval(cfg.metric, all, emb, cache ? &*cache : nullptr,
                               {cfg.pull_budget_bytes, cfg.threads});
  report.preprocess_seconds = seconds_since(preprocess_start);

  const auto eval_start = Clock::now();
  const std::size_t n_train = train.size();
  std::vector<ClassId> predicted(test.size());
  parallel_for(test.size(), cfg.threads, [&](std::size_t q) {
    std::vector<double> d(n_train);
    for (std::size_t i = 0; i < n_train; ++i) d[i] = eval(n_train + q, i);
    predicted[q] = knn_vote(d, train.labels, cfg.k);
  });
  report.eval_seconds = seconds_since(eval_start);

  const std::size_t classes =
      std::max({train.num_classes(), test.num_classes(), class_count(train.labels),
                class_count(test.labels)});
  report.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
  for (std::size_t q = 0; q < test.size(); ++q) {
    ++report.confusion[test.labels[q]][predicted[q]];
    if (predicted[q] != test.labels[q]) ++report.failures;
  }
  report.evaluated = test.size();
  report.test_error = test.size() == 0 ? 0.0
                                       : 100.0 * static_cast<double>(report.failures) /
                                             static_cast<double>(test.size());
  return report;
}

EvalReport run_triplets(const TripletSet& triplets, std::size_t num_docs,
                        const PairDistance& dist, unsigned threads) {
  validate_triplets(triplets, num_docs);
  EvalReport report;
  const auto start = Clock::now();
  std::vector<char> success(triplets.size(), 0);
  parallel_for(triplets.size(), threads, [&](std::size_t t) {
    const auto& x = triplets[t];
    success[t] = dist(x.a, x.b) < dist(x.a, x.c) ? 1 : 0;
  });
  report.eval_seconds = seconds_since(start);
  report.evaluated = triplets.size();
  report.failures = static_cast<std::size_t>(std::count(success.begin(), success.end(), 0));
  report.test_error = triplets.empty() ? 0.0
                                       : 100.0 * static_cast<double>(report.failures) /
                                             static_cast<double>(triplets.size());
  return report;
}

}  // namespace relwmd
