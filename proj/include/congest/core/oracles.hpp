#pragma once

// Centralized reference computations. Every distributed algorithm in this
// library is differentially tested against one of these.

#include <algorithm>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "congest/core/graph.hpp"
#include "congest/core/union_find.hpp"

namespace congest {

// All-pairs table of hop distances, rows and columns in vertex (ascending ID) order.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(std::size_t n) : n_(n), cells_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  Distance& at(Vertex source, Vertex target) { return cells_.at(std::size_t{source} * n_ + target); }
  const Distance& at(Vertex source, Vertex target) const { return cells_.at(std::size_t{source} * n_ + target); }

  std::span<const Distance> row(Vertex source) const { return {cells_.data() + std::size_t{source} * n_, n_}; }

  friend bool operator==(const DistanceTable&, const DistanceTable&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Distance> cells_;
};

// Unweighted hop distances from source, indexed by vertex.
inline std::vector<Distance> bfs_distances(const Graph& g, NodeId source) {
  const Vertex s = g.index_of(source);
  std::vector<Distance> dist(g.size());
  std::deque<Vertex> queue{s};
  dist[s] = 0;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (Vertex y : g.neighbors(x)) {
      if (!dist[y]) {
        dist[y] = *dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

inline DistanceTable apsp_oracle(const Graph& g) {
  DistanceTable table(g.size());
  for (Vertex s = 0; s < g.size(); ++s) {
    const auto row = bfs_distances(g, g.id(s));
    for (Vertex t = 0; t < g.size(); ++t) table.at(s, t) = row[t];
  }
  return table;
}

inline std::uint64_t eccentricity(const Graph& g, Vertex v) {
  std::uint64_t best = 0;
  for (const auto& d : bfs_distances(g, g.id(v))) best = std::max(best, d.value_or(0));
  return best;
}

inline std::uint64_t diameter(const Graph& g) {
  std::uint64_t best = 0;
  for (Vertex v = 0; v < g.size(); ++v) best = std::max(best, eccentricity(g, v));
  return best;
}

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_distinct_weights(const Graph& g) {
  std::vector<std::uint64_t> w;
  w.reserve(g.edge_count());
  for (const auto& e : g.edges()) w.push_back(e.weight);
  std::sort(w.begin(), w.end());
  if (std::adjacent_find(w.begin(), w.end()) != w.end())
    throw OracleError("edge weights are not pairwise distinct; the MST is not unique");
}

// Kruskal. Returns the unique MST as ID edges sorted by (u, v).
inline std::vector<IdEdge> mst_oracle(const Graph& g) {
  if (!g.weighted()) throw OracleError("mst_oracle needs a weighted graph");
  require_distinct_weights(g);
  std::vector<Edge> order(g.edges().begin(), g.edges().end());
  std::sort(order.begin(), order.end(), [](const Edge& a, const Edge& b) { return a.weight < b.weight; });
  UnionFind uf(g.size());
  std::vector<IdEdge> tree;
  tree.reserve(g.size() - 1);
  for (const auto& e : order)
    if (uf.unite(e.u, e.v)) tree.push_back(g.id_edge(e));
  std::sort(tree.begin(), tree.end());
  return tree;
}

inline std::uint64_t total_weight(std::span<const IdEdge> edges) {
  std::uint64_t sum = 0;
  for (const auto& e : edges) sum += e.weight;
  return sum;
}

// d_h(s, v): length of the shortest path from s to v using at most h edges
// (edge weights when g is weighted, hops otherwise). Result[i][v] is for
// sources[i]. h-iteration Bellman-Ford.
inline std::vector<std::vector<Distance>> hop_limited_distances(const Graph& g, std::span<const NodeId> sources,
                                                                std::uint64_t h) {
  std::vector<std::vector<Distance>> result;
  result.reserve(sources.size());
  for (NodeId source : sources) {
    std::vector<Distance> dist(g.size());
    dist[g.index_of(source)] = 0;
    for (std::uint64_t round = 0; round < h; ++round) {
      auto next = dist;
      bool changed = false;
      for (const auto& e : g.edges()) {
        auto relax = [&](Vertex from, Vertex to) {
          if (!dist[from]) return;
          const std::uint64_t cand = *dist[from] + e.weight;
          if (!next[to] || cand < *next[to]) {
            next[to] = cand;
            changed = true;
          }
        };
        relax(e.u, e.v);
        relax(e.v, e.u);
      }
      dist = std::move(next);
      if (!changed) break;
    }
    result.push_back(std::move(dist));
  }
  return result;
}

}  // namespace congest
