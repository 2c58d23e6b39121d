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

#include "relwmd/evaluator.h"

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include "relwmd/distances.h"

namespace relwmd {

namespace {

constexpr std::array<std::pair<Metric, std::string_view>, 8> kNames = {{
    {Metric::kWcd, "wcd"},
    {Metric::kCosine, "cosine"},
    {Metric::kWmd, "wmd"},
    {Metric::kRwmd, "rwmd"},
    {Metric::kRwmdLinear, "rwmd-l"},
    {Metric::kRelWmd, "rel-wmd"},
    {Metric::kRelRwmd, "rel-rwmd"},
    {Metric::kRelRwmdLinear, "rel-rwmd-l"},
}};

}  // namespace

std::optional<Metric> parse_metric(std::string_view name) {
  for (const auto& [m, n] : kNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

std::string_view metric_name(Metric m) {
  for (const auto& [x, n] : kNames) {
    if (x == m) return n;
  }
  return "?";
}

bool needs_cache(Metric m) {
  return m == Metric::kRelWmd || m == Metric::kRelRwmd || m == Metric::kRelRwmdLinear;
}

bool needs_embeddings(Metric m) {
  return m == Metric::kWcd || m == Metric::kWmd || m == Metric::kRwmd ||
         m == Metric::kRwmdLinear;
}

PairwiseEvaluator::PairwiseEvaluator(Metric metric, std::span<const Document> docs,
                                     const EmbeddingMatrix* emb,
                                     const RelatedCache* cache, Options options)
    : metric_(metric), docs_(docs), emb_(emb), cache_(cache) {
  if (needs_embeddings(metric) && emb_ == nullptr) {
    throw std::invalid_argument(std::string(metric_name(metric)) + " needs embeddings");
  }
  if (needs_cache(metric) && cache_ == nullptr) {
    throw std::invalid_argument(std::string(metric_name(metric)) +
                                " needs a related-word cache");
  }
  if (metric == Metric::kRwmdLinear) {
    dense_ = std::make_unique<DensePullMatrix>(docs, *emb_, options.pull_budget_bytes,
                                               options.threads);
  } else if (metric == Metric::kRelRwmdLinear) {
    sparse_ = std::make_unique<SparsePullMatrix>(docs, *cache_, options.threads);
  }
}

PairwiseEvaluator::~PairwiseEvaluator() = default;
PairwiseEvaluator::PairwiseEvaluator(PairwiseEvaluator&&) noexcept = default;
PairwiseEvaluator& PairwiseEvaluator::operator=(PairwiseEvaluator&&) noexcept = default;

double PairwiseEvaluator::operator()(std::size_t a, std::size_t b) const {
  const Document& x = docs_[a];
  const Document& y = docs_[b];
  switch (metric_) {
    case Metric::kWcd: return wcd(x, y, *emb_);
    case Metric::kCosine: return cosine(x, y);
    case Metric::kWmd: return wmd(x, y, *emb_);
    case Metric::kRwmd: return rwmd_standard(x, y, *emb_);
    case Metric::kRwmdLinear: return rwmd_linear(*dense_, x, y, a, b);
    case Metric::kRelWmd: return rel_wmd(x, y, *cache_);
    case Metric::kRelRwmd: return rel_rwmd_standard(x, y, *cache_);
    case Metric::kRelRwmdLinear: return rel_rwmd_linear(*sparse_, x, y, a, b);
  }
  throw std::logic_error("unknown metric");
}

}  // namespace relwmd
