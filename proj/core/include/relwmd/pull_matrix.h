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

#ifndef RELWMD_PULL_MATRIX_H_
#define RELWMD_PULL_MATRIX_H_

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "relwmd/cache.h"
#include "relwmd/corpus.h"
#include "relwmd/distances.h"
#include "relwmd/embeddings.h"

namespace relwmd {

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultPullBudgetBytes = std::size_t{4} << 30;

// One row per document, one column per vocabulary word. Column v holds the
// distance from v to its closest word of the document, or to its second
// closest when v belongs to the document. A single-word document stores
// +infinity for its own word.
class DensePullMatrix {
 public:
  static constexpr double kNoSecond = std::numeric_limits<double>::infinity();

  // Throws BudgetError when docs.size() * n * 8 bytes exceeds budget_bytes.
  DensePullMatrix(std::span<const Document> docs, const EmbeddingMatrix& emb,
                  std::size_t budget_bytes = kDefaultPullBudgetBytes,
                  unsigned threads = 0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t row, WordId word) const { return data_[row * cols_ + word]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Linear-time RWMD: one pull-matrix read per word of each document.
double rwmd_linear(const DensePullMatrix& m, const Document& a, const Document& b,
                   std::size_t row_a, std::size_t row_b, LookupStats* stats = nullptr);

// Sparse rows for the related-word relaxation. Row entries are scattered
// from the cached lists (both directions) of the document's words, keeping
// the per-key minimum; missing keys read as c_max. Entries above c_max are
// not stored.
class SparsePullMatrix {
 public:
  SparsePullMatrix(std::span<const Document> docs, const RelatedCache& cache,
                   unsigned threads = 0);

  std::size_t rows() const { return rows_.size(); }
  double c_max() const { return c_max_; }
  std::size_t stored(std::size_t row) const { return rows_[row].size(); }

  double read(std::size_t row, WordId word) const {
    const auto& r = rows_[row];
    auto it = r.find(word);
    return it == r.end() ? c_max_ : it->second;
  }

 private:
  double c_max_ = 0.0;
  std::vector<std::unordered_map<WordId, double>> rows_;
};

double rel_rwmd_linear(const SparsePullMatrix& m, const Document& a,
                       const Document& b, std::size_t row_a, std::size_t row_b,
                       LookupStats* stats = nullptr);

}  // namespace relwmd

#endif  // RELWMD_PULL_MATRIX_H_
