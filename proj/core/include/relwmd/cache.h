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

#ifndef RELWMD_CACHE_H_
#define RELWMD_CACHE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "relwmd/corpus.h"
#include "relwmd/embeddings.h"

namespace relwmd {

struct Neighbor {
  WordId word = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Orders by (distance, word id). Used for every top-r selection so ties at
// the r-th distance resolve to the smaller id.
inline bool closer(const Neighbor& a, const Neighbor& b) {
  return a.distance < b.distance ||
         (a.distance == b.distance && a.word < b.word);
}

struct CacheInfo {
  bool clustered = false;
  // Set when no distance was left out of the lists and c_max fell back to
  // the largest stored distance.
  bool c_max_fallback = false;
  std::uint64_t k = 1;
  std::uint32_t kmeans_iters = 0;
  std::uint64_t seed = 0;
  // Sum and count of the non-selected (accumulated) distances.
  double accumulated_sum = 0.0;
  std::uint64_t accumulated_count = 0;
  // Cross-cluster sample folded into c_max by the clustered builder.
  double sampled_sum = 0.0;
  std::uint64_t sampled_count = 0;

  friend bool operator==(const CacheInfo&, const CacheInfo&) = default;
};

// Per-word top-r neighbor lists with exact distances, plus c_max, the
// single value that stands in for every distance not in the cache.
//
// Relatedness is symmetric: words a and b are related when either list
// holds the other. reverse_neighbors(w) enumerates words whose list
// holds w, so both directions are reachable in O(r) expected time.
class RelatedCache {
 public:
  RelatedCache() = default;
  RelatedCache(std::size_t r, std::vector<std::vector<Neighbor>> lists,
               double c_max, CacheInfo info = {});

  std::size_t r() const { return r_; }
  std::size_t num_words() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  double c_max() const { return c_max_; }
  const CacheInfo& info() const { return info_; }

  std::span<const Neighbor> neighbors(WordId w) const {
    return {entries_.data() + offsets_[w], offsets_[w + 1] - offsets_[w]};
  }
  std::span<const Neighbor> reverse_neighbors(WordId w) const {
    return {reverse_entries_.data() + reverse_offsets_[w],
            reverse_offsets_[w + 1] - reverse_offsets_[w]};
  }
  std::size_t total_entries() const { return entries_.size(); }

  friend bool operator==(const RelatedCache& a, const RelatedCache& b) {
    return a.r_ == b.r_ && a.c_max_ == b.c_max_ && a.info_ == b.info_ &&
           a.offsets_ == b.offsets_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t r_ = 0;
  double c_max_ = 0.0;
  CacheInfo info_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> entries_;
  std::vector<std::size_t> reverse_offsets_;
  std::vector<Neighbor> reverse_entries_;
};

// Scans every ordered pair. Each word keeps its r closest words; every
// other distance goes into the accumulator whose mean is c_max.
RelatedCache build_cache_exact(const EmbeddingMatrix& emb, std::size_t r,
                               unsigned threads = 0);

struct ClusterAssignment {
  std::size_t k = 0;
  std::vector<std::uint32_t> assign;
  std::vector<double> centroids;  // k x d, row-major
  unsigned iterations = 0;

  // Sum of squared distances from each point to its centroid.
  double sse(const EmbeddingMatrix& emb) const;
};

// Lloyd's algorithm from k-means++ seeding; deterministic for a given
// seed. A cluster that empties out is reseeded with the point farthest
// from its current centroid.
ClusterAssignment kmeans(const EmbeddingMatrix& emb, std::size_t k,
                         unsigned max_iters, std::uint64_t seed);

// ceil(sqrt(n / iters)), clamped to [1, n].
std::size_t clustered_cluster_count(std::size_t n, unsigned iters);

inline constexpr unsigned kDefaultKmeansIters = 5;
inline constexpr std::uint64_t kCrossClusterSampleCap = 1'000'000;

// Restricts each word's neighbor search to its own k-means cluster. c_max
// averages the within-cluster leftovers together with a uniform sample of
// cross-cluster ordered pairs.
RelatedCache build_cache_clustered(const EmbeddingMatrix& emb, std::size_t r,
                                   unsigned iters = kDefaultKmeansIters,
                                   std::uint64_t seed = 0,
                                   unsigned threads = 0);

// Cached neighbors of w that occur in doc, in list order. One membership
// probe per cached neighbor.
std::vector<Neighbor> related_in(const RelatedCache& cache, WordId w,
                                 const Document& doc);

// Versioned little-endian binary format:
//   "RWMDCACH" | u32 version | u64 n | u64 r | u32 flags | f64 c_max
//   | u64 k | u32 iters | u64 seed | f64 acc_sum | u64 acc_count
//   | f64 sample_sum | u64 sample_count
//   then per word: u32 count, count x (u32 word, f64 distance)
void write_cache(std::ostream& out, const RelatedCache& cache);
RelatedCache read_cache(std::istream& in);
void save_cache(const std::filesystem::path& path, const RelatedCache& cache);
RelatedCache load_cache(const std::filesystem::path& path);

// Lossless human-readable dump. Tokens are printed when vocab is given.
void dump_cache_text(std::ostream& out, const RelatedCache& cache,
                     const Vocabulary* vocab = nullptr);

}  // namespace relwmd

#endif  // RELWMD_CACHE_H_
