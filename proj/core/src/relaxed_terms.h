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

#ifndef RELWMD_SRC_RELAXED_TERMS_H_
#define RELWMD_SRC_RELAXED_TERMS_H_

#include <cmath>
#include <cstddef>
#include <span>

namespace relwmd::internal {

// sum_i weights[i] * nearest(i), skipping zero weights. Both the standard
// and the pull-matrix relaxations go through here so that they add the
// same terms in the same order.
//
// An infinite minimum only arises for a word whose whole mass was
// cancelled by the identical word (single-word documents); it contributes
// nothing.
template <typename Nearest>
double weighted_minimum_sum(std::span<const double> weights, Nearest&& nearest) {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double m = nearest(i);
    if (std::isinf(m)) continue;
    sum += weights[i] * m;
  }
  return sum;
}

}  // namespace relwmd::internal

#endif  // RELWMD_SRC_RELAXED_TERMS_H_
