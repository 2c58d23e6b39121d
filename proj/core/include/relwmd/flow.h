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

#ifndef RELWMD_FLOW_H_
#define RELWMD_FLOW_H_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "relwmd/cache.h"
#include "relwmd/corpus.h"
#include "relwmd/embeddings.h"

namespace relwmd {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlowEdge {
  std::uint32_t source = 0;
  std::uint32_t sink = 0;
  double cost = 0.0;
};

// A transportation problem over integral masses. Masses are the nBOW
// weights multiplied by `scale`; costs stay real.
struct TransportInstance {
  std::vector<std::int64_t> supplies;
  std::vector<std::int64_t> demands;
  std::vector<FlowEdge> edges;
  std::int64_t scale = 1;
};

struct FlowSolution {
  // In original mass units (divided by scale).
  double objective = 0.0;
  std::vector<double> flows;         // per edge, original units
  std::vector<std::int64_t> units;   // per edge, integral scaled units
};

struct IntegerMasses {
  std::vector<std::int64_t> supplies;
  std::vector<std::int64_t> demands;
  std::int64_t scale = 1;
};

// supply_i = count_i * total(b), demand_j = count'_j * total(a),
// scale = total(a) * total(b). Throws OverflowError beyond int64.
IntegerMasses integerize(const Document& a, const Document& b);

// Exact minimum-cost flow via successive shortest paths with Dijkstra on
// reduced costs. Every source must ship its whole supply and every sink
// must receive its whole demand. Throws std::invalid_argument for
// unbalanced masses or negative costs and InfeasibleError when the edge set
// cannot route the masses.
FlowSolution solve_transport(const TransportInstance& inst);

// All |a|*|b| edges with Euclidean costs. Shared words keep their
// zero-cost edge.
TransportInstance build_dense(const Document& a, const Document& b,
                              const EmbeddingMatrix& emb);

// Sparse instance under the related-word cost structure: zero-cost edges
// for shared words, cached distances for related pairs, and a transit
// node t carrying all unrelated mass at cost c_max.
//
// Layout: sources 0..|a|-1 are a's words and source |a| is t; sinks
// 0..|b|-1 are b's words and sink |b| is t. Each word source i has an edge
// (i, |b|) of cost c_max, t has a zero-cost edge (|a|, j) to every word
// sink, and a zero-cost edge (|a|, |b|) absorbs the slack. Both t nodes
// carry `scale` units, so flow into t from words equals flow out of t to
// words.
TransportInstance build_compact(const Document& a, const Document& b,
                                const RelatedCache& cache);

// DIMACS min-cost-flow text ("p min", "n", "a" lines). Costs are written
// with full precision; nodes are sources 1..m followed by sinks.
void write_dimacs(std::ostream& out, const TransportInstance& inst);

}  // namespace relwmd

#endif  // RELWMD_FLOW_H_
