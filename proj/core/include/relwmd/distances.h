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

#ifndef RELWMD_DISTANCES_H_
#define RELWMD_DISTANCES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "relwmd/cache.h"
#include "relwmd/corpus.h"
#include "relwmd/embeddings.h"

namespace relwmd {

// Optional instrumentation for the relaxed distances.
struct LookupStats {
  std::size_t membership_probes = 0;  // hash probes into the other document
  std::size_t row_reads = 0;          // pull-matrix reads
};

// Word centroid distance: Euclidean distance between sum_i D_i x(w_i) and
// the same for the other document.
double wcd(const Document& a, const Document& b, const EmbeddingMatrix& emb);

// 1 - cosine similarity of the nBOW weight vectors.
double cosine(const Document& a, const Document& b);

// Word Mover's Distance: optimum of the dense transportation problem.
double wmd(const Document& a, const Document& b, const EmbeddingMatrix& emb);

// Shared-word excess. For each word present in both documents the common
// mass cancels; the remaining excess of the heavier side is matched to
// the nearest *other* word of the opposite document.
struct ExcessAdjustment {
  std::vector<double> source_weights;
  std::vector<double> sink_weights;
  // Sink index removed from source i's minimum (or none), and vice versa.
  std::vector<std::optional<std::uint32_t>> source_excluded;
  std::vector<std::optional<std::uint32_t>> sink_excluded;
};

ExcessAdjustment shared_word_excess(const Document& a, const Document& b);

// Relaxed WMD from the pairwise distance block. With `excess` false the
// shared-word adjustment is skipped.
double rwmd_standard(const Document& a, const Document& b,
                     const EmbeddingMatrix& emb, bool excess = true);

// WMD under the related-word cost structure: 0 for shared words, the cached
// distance for related pairs, c_max otherwise.
double rel_wmd(const Document& a, const Document& b, const RelatedCache& cache);

// Relaxed counterpart of rel_wmd. Every per-word minimum ranges over the
// related words found in the other document (capped at c_max), costing
// O((|a| + |b|) * r) membership probes.
double rel_rwmd_standard(const Document& a, const Document& b,
                         const RelatedCache& cache, LookupStats* stats = nullptr);

}  // namespace relwmd

#endif  // RELWMD_DISTANCES_H_
