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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "relwmd/cache.h"

namespace relwmd {

namespace {

std::span<const double> centroid_row(const std::vector<double>& c, std::size_t d,
                                     std::size_t j) {
  return {c.data() + j * d, d};
}

// Index of the nearest centroid; ties go to the lower index.
std::uint32_t nearest(std::span<const double> x, const std::vector<double>& c,
                      std::size_t k, std::size_t d, double* best_out) {
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t arg = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double s = squared_distance(x, centroid_row(c, d, j));
    if (s < best) {
      best = s;
      arg = static_cast<std::uint32_t>(j);
    }
  }
  if (best_out) *best_out = best;
  return arg;
}

std::vector<double> seed_plus_plus(const EmbeddingMatrix& emb, std::size_t k,
                                   std::mt19937_64& rng) {
  const std::size_t n = emb.rows();
  const std::size_t d = emb.dim();
  std::vector<double> centroids;
  centroids.reserve(k * d);
  std::vector<char> chosen(n, 0);

  auto take = [&](std::size_t i) {
    chosen[i] = 1;
    const auto r = emb.row(static_cast<WordId>(i));
    centroids.insert(centroids.end(), r.begin(), r.end());
  };

  take(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = squared_distance(emb.row(static_cast<WordId>(i)), centroid_row(centroids, d, 0));
  }

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] == 0.0) continue;
        pick = i;
        u -= d2[i];
        if (u < 0.0) break;
      }
    }
    if (pick == n) {
      // Every unchosen point coincides with a centroid; pick uniformly.
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) rest.push_back(i);
      }
      pick = rest[std::uniform_int_distribution<std::size_t>(0, rest.size() - 1)(rng)];
    }
    take(pick);
    const auto cen = centroid_row(centroids, d, c);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(emb.row(static_cast<WordId>(i)), cen));
    }
  }
  return centroids;
}

}  // namespace

double ClusterAssignment::sse(const EmbeddingMatrix& emb) const {
  const std::size_t d = emb.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < assign.size(); ++i) {
    total += squared_distance(emb.row(static_cast<WordId>(i)),
                              centroid_row(centroids, d, assign[i]));
  }
  return total;
}

ClusterAssignment kmeans(const EmbeddingMatrix& emb, std::size_t k,
                         unsigned max_iters, std::uint64_t seed) {
  const std::size_t n = emb.rows();
  const std::size_t d = emb.dim();
  if (k == 0 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");
  if (max_iters == 0) throw std::invalid_argument("kmeans: need max_iters >= 1");

  std::mt19937_64 rng(seed);
  ClusterAssignment out;
  out.k = k;
  out.centroids = seed_plus_plus(emb, k, rng);
  out.assign.assign(n, 0);

  std::vector<double> point_d2(n);
  std::vector<double> sums(k * d);
  std::vector<std::size_t> sizes(k);

  for (unsigned iter = 0; iter < max_iters; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = nearest(emb.row(static_cast<WordId>(i)), out.centroids, k, d,
                             &point_d2[i]);
      if (a != out.assign[i]) {
        out.assign[i] = a;
        changed = true;
      }
    }
    out.iterations = iter + 1;
    if (!changed) break;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = emb.row(static_cast<WordId>(i));
      double* s = sums.data() + out.assign[i] * d;
      for (std::size_t t = 0; t < d; ++t) s[t] += r[t];
      ++sizes[out.assign[i]];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] == 0) continue;
      for (std::size_t t = 0; t < d; ++t) {
        out.centroids[j * d + t] = sums[j * d + t] / static_cast<double>(sizes[j]);
      }
    }
    // Repair empty clusters from the farthest point of a cluster that can
    // spare one.
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] != 0) continue;
      std::size_t far = n;
      double far_d2 = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[out.assign[i]] <= 1) continue;
        const double s = squared_distance(emb.row(static_cast<WordId>(i)),
                                          centroid_row(out.centroids, d, out.assign[i]));
        if (s > far_d2) {
          far_d2 = s;
          far = i;
        }
      }
      if (far == n) break;
      --sizes[out.assign[far]];
      out.assign[far] = static_cast<std::uint32_t>(j);
      sizes[j] = 1;
      const auto r = emb.row(static_cast<WordId>(far));
      std::copy(r.begin(), r.end(), out.centroids.begin() + static_cast<std::ptrdiff_t>(j * d));
    }
  }
  // Centroids reflect the final assignment.
  std::fill(sums.begin(), sums.end(), 0.0);
  std::fill(sizes.begin(), sizes.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = emb.row(static_cast<WordId>(i));
    double* s = sums.data() + out.assign[i] * d;
    for (std::size_t t = 0; t < d; ++t) s[t] += r[t];
    ++sizes[out.assign[i]];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (sizes[j] == 0) continue;
    for (std::size_t t = 0; t < d; ++t) {
      out.centroids[j * d + t] = sums[j * d + t] / static_cast<double>(sizes[j]);
    }
  }
  return out;
}

std::size_t clustered_cluster_count(std::size_t n, unsigned iters) {
  if (n == 0) return 1;
  if (iters == 0) iters = 1;
  const double raw = std::sqrt(static_cast<double>(n) / static_cast<double>(iters));
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-12));
  return std::clamp<std::size_t>(k, 1, n);
}

}  // namespace relwmd
