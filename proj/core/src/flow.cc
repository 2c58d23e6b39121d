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

#include "relwmd/flow.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>

namespace relwmd {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("document masses overflow 64-bit integers");
  }
  return out;
}

// Residual network for successive shortest paths. Node 0 is the super
// source, node 1 + i is source i, node 1 + m + j is sink j and the last
// node is the super sink.
class Residual {
 public:
  explicit Residual(std::size_t nodes) : head_(nodes, -1) {}

  // Returns the index of the forward arc.
  int add(int u, int v, std::int64_t cap, double cost) {
    const int id = static_cast<int>(to_.size());
    push(u, v, cap, cost);
    push(v, u, 0, -cost);
    return id;
  }

  std::size_t nodes() const { return head_.size(); }
  int head(int u) const { return head_[u]; }
  int next(int e) const { return next_[e]; }
  int to(int e) const { return to_[e]; }
  std::int64_t cap(int e) const { return cap_[e]; }
  double cost(int e) const { return cost_[e]; }
  std::int64_t flow(int e) const { return cap_[e ^ 1]; }

  void push_flow(int e, std::int64_t amount) {
    cap_[e] -= amount;
    cap_[e ^ 1] += amount;
  }

 private:
  void push(int u, int v, std::int64_t cap, double cost) {
    to_.push_back(v);
    cap_.push_back(cap);
    cost_.push_back(cost);
    next_.push_back(head_[u]);
    head_[u] = static_cast<int>(to_.size()) - 1;
  }

  std::vector<int> head_;
  std::vector<int> next_;
  std::vector<int> to_;
  std::vector<std::int64_t> cap_;
  std::vector<double> cost_;
};

void validate(const TransportInstance& inst) {
  if (inst.scale <= 0) throw std::invalid_argument("transport: scale must be positive");
  std::int64_t s = 0;
  std::int64_t d = 0;
  for (auto v : inst.supplies) {
    if (v < 0) throw std::invalid_argument("transport: negative supply");
    s += v;
  }
  for (auto v : inst.demands) {
    if (v < 0) throw std::invalid_argument("transport: negative demand");
    d += v;
  }
  if (s != d) throw std::invalid_argument("transport: supplies and demands differ");
  for (const auto& e : inst.edges) {
    if (e.source >= inst.supplies.size() || e.sink >= inst.demands.size()) {
      throw std::invalid_argument("transport: edge endpoint out of range");
    }
    if (!(e.cost >= 0.0) || !std::isfinite(e.cost)) {
      throw std::invalid_argument("transport: edge costs must be finite and >= 0");
    }
  }
}

}  // namespace

IntegerMasses integerize(const Document& a, const Document& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("integerize: empty document");
  const auto total_a = static_cast<std::int64_t>(a.total());
  const auto total_b = static_cast<std::int64_t>(b.total());
  if (total_a <= 0 || total_b <= 0) throw OverflowError("document total out of range");
  IntegerMasses out;
  out.scale = checked_mul(total_a, total_b);
  out.supplies.reserve(a.size());
  for (auto c : a.counts()) out.supplies.push_back(checked_mul(static_cast<std::int64_t>(c), total_b));
  out.demands.reserve(b.size());
  for (auto c : b.counts()) out.demands.push_back(checked_mul(static_cast<std::int64_t>(c), total_a));
  return out;
}

FlowSolution solve_transport(const TransportInstance& inst) {
  validate(inst);
  const int m = static_cast<int>(inst.supplies.size());
  const int k = static_cast<int>(inst.demands.size());
  const int source = 0;
  const int sink = m + k + 1;
  const std::int64_t total =
      std::accumulate(inst.supplies.begin(), inst.supplies.end(), std::int64_t{0});

  Residual g(static_cast<std::size_t>(m + k + 2));
  for (int i = 0; i < m; ++i) g.add(source, 1 + i, inst.supplies[i], 0.0);
  for (int j = 0; j < k; ++j) g.add(1 + m + j, sink, inst.demands[j], 0.0);
  std::vector<int> arc(inst.edges.size());
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    const auto& fe = inst.edges[e];
    arc[e] = g.add(1 + static_cast<int>(fe.source), 1 + m + static_cast<int>(fe.sink),
                   total, fe.cost);
  }

  const std::size_t nodes = g.nodes();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> potential(nodes, 0.0);
  std::vector<double> dist(nodes);
  std::vector<int> via(nodes);
  std::vector<char> done(nodes);
  using Item = std::pair<double, int>;

  std::int64_t shipped = 0;
  while (shipped < total) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(via.begin(), via.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      const auto [du, u] = heap.top();
      heap.pop();
      if (done[u]) continue;
      done[u] = 1;
      if (u == sink) break;
      for (int e = g.head(u); e != -1; e = g.next(e)) {
        if (g.cap(e) <= 0) continue;
        const int v = g.to(e);
        if (done[v]) continue;
        // Reduced costs are nonnegative up to rounding.
        const double rc = std::max(0.0, g.cost(e) + potential[u] - potential[v]);
        const double nd = du + rc;
        if (nd < dist[v]) {
          dist[v] = nd;
          via[v] = e;
          heap.emplace(nd, v);
        }
      }
    }
    if (!done[sink]) {
      throw InfeasibleError("transport: edge set cannot route all supply");
    }
    const double reach = dist[sink];
    for (std::size_t v = 0; v < nodes; ++v) potential[v] += std::min(dist[v], reach);

    std::int64_t push = total - shipped;
    for (int v = sink; v != source; v = g.to(via[v] ^ 1)) push = std::min(push, g.cap(via[v]));
    for (int v = sink; v != source; v = g.to(via[v] ^ 1)) g.push_flow(via[v], push);
    shipped += push;
  }

  FlowSolution sol;
  sol.units.resize(inst.edges.size());
  sol.flows.resize(inst.edges.size());
  const auto scale = static_cast<double>(inst.scale);
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    sol.units[e] = g.flow(arc[e]);
    sol.flows[e] = static_cast<double>(sol.units[e]) / scale;
    sol.objective += sol.flows[e] * inst.edges[e].cost;
  }
  return sol;
}

TransportInstance build_dense(const Document& a, const Document& b,
                              const EmbeddingMatrix& emb) {
  auto masses = integerize(a, b);
  TransportInstance inst;
  inst.supplies = std::move(masses.supplies);
  inst.demands = std::move(masses.demands);
  inst.scale = masses.scale;
  inst.edges.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto xi = emb.row(a.words()[i]);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double c = std::sqrt(squared_distance(xi, emb.row(b.words()[j])));
      inst.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), c});
    }
  }
  return inst;
}

TransportInstance build_compact(const Document& a, const Document& b,
                                const RelatedCache& cache) {
  auto masses = integerize(a, b);
  TransportInstance inst;
  inst.scale = masses.scale;
  inst.supplies = std::move(masses.supplies);
  inst.demands = std::move(masses.demands);
  const auto t_source = static_cast<std::uint32_t>(a.size());
  const auto t_sink = static_cast<std::uint32_t>(b.size());
  inst.supplies.push_back(inst.scale);
  inst.demands.push_back(inst.scale);

  // (source, sink) -> cost; related pairs are found from both sides.
  std::vector<std::pair<std::uint64_t, double>> pairs;
  const std::uint64_t width = b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const WordId w = a.words()[i];
    if (auto j = b.position(w)) pairs.emplace_back(i * width + *j, 0.0);
    for (const auto& nb : related_in(cache, w, b)) {
      pairs.emplace_back(i * width + *b.position(nb.word), nb.distance);
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (const auto& nb : related_in(cache, b.words()[j], a)) {
      pairs.emplace_back(*a.position(nb.word) * width + j, nb.distance);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end(),
                          [](const auto& x, const auto& y) { return x.first == y.first; }),
              pairs.end());

  inst.edges.reserve(pairs.size() + a.size() + b.size() + 1);
  for (const auto& [key, cost] : pairs) {
    inst.edges.push_back({static_cast<std::uint32_t>(key / width),
                          static_cast<std::uint32_t>(key % width), cost});
  }
  for (std::uint32_t i = 0; i < t_source; ++i) inst.edges.push_back({i, t_sink, cache.c_max()});
  for (std::uint32_t j = 0; j < t_sink; ++j) inst.edges.push_back({t_source, j, 0.0});
  inst.edges.push_back({t_source, t_sink, 0.0});
  return inst;
}

void write_dimacs(std::ostream& out, const TransportInstance& inst) {
  const std::size_t m = inst.supplies.size();
  const std::size_t k = inst.demands.size();
  out << "c transportation instance, scale " << inst.scale << '\n';
  out << "p min " << (m + k) << ' ' << inst.edges.size() << '\n';
  for (std::size_t i = 0; i < m; ++i) out << "n " << (i + 1) << ' ' << inst.supplies[i] << '\n';
  for (std::size_t j = 0; j < k; ++j) out << "n " << (m + j + 1) << ' ' << -inst.demands[j] << '\n';
  char buf[64];
  for (const auto& e : inst.edges) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), e.cost);
    out << "a " << (e.source + 1) << ' ' << (m + e.sink + 1) << " 0 "
        << inst.scale << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf))
        << '\n';
  }
}

}  // namespace relwmd
