#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "congest/core/node_id.hpp"

namespace congest {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Undirected edge between two dense indices, u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  std::uint64_t weight = 1;

  friend constexpr bool operator==(const Edge&, const Edge&) = default;
};

// Edge expressed in node IDs, u < v. This is what node programs exchange and
// what MST outputs are compared on.
struct IdEdge {
  NodeId u;
  NodeId v;
  std::uint64_t weight = 1;

  friend constexpr auto operator<=>(const IdEdge&, const IdEdge&) = default;
};

struct EdgeSpec {
  NodeId u;
  NodeId v;
  std::uint64_t weight = 1;
};

// Connected simple undirected graph. Nodes are stored in ascending ID order;
// edges are normalized to u < v and sorted lexicographically.
class Graph {
 public:
  Graph() = default;

  Graph(std::vector<NodeId> ids, std::span<const EdgeSpec> edges, bool weighted)
      : ids_(std::move(ids)), weighted_(weighted) {
    std::sort(ids_.begin(), ids_.end());
    if (ids_.empty()) throw GraphError("graph must have at least one node");
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
      throw GraphError("duplicate node id");
    index_.reserve(ids_.size());
    for (Vertex i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);

    edges_.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.u == e.v) throw GraphError("self-loop at node " + std::to_string(e.u.value));
      if (weighted_ && e.weight == 0) throw GraphError("edge weights must be positive");
      Vertex a = index_of(e.u);
      Vertex b = index_of(e.v);
      if (a > b) std::swap(a, b);
      edges_.push_back(Edge{a, b, weighted_ ? e.weight : 1});
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& x, const Edge& y) { return std::tie(x.u, x.v) < std::tie(y.u, y.v); });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
        throw GraphError("parallel edge " + std::to_string(ids_[edges_[i].u].value) + "-" +
                         std::to_string(ids_[edges_[i].v].value));
    }

    adj_.assign(ids_.size(), {});
    adj_edge_.assign(ids_.size(), {});
    for (std::uint32_t ei = 0; ei < edges_.size(); ++ei) {
      adj_[edges_[ei].u].push_back(edges_[ei].v);
      adj_[edges_[ei].v].push_back(edges_[ei].u);
    }
    for (Vertex x = 0; x < ids_.size(); ++x) std::sort(adj_[x].begin(), adj_[x].end());
    for (Vertex x = 0; x < ids_.size(); ++x) {
      adj_edge_[x].resize(adj_[x].size());
      for (std::size_t k = 0; k < adj_[x].size(); ++k) {
        const Vertex y = adj_[x][k];
        const auto key = std::minmax(x, y);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), key, [](const Edge& e, const auto& kv) {
          return std::tie(e.u, e.v) < std::tie(kv.first, kv.second);
        });
        adj_edge_[x][k] = static_cast<std::uint32_t>(it - edges_.begin());
      }
    }
    if (!connected()) throw GraphError("graph is not connected");
  }

  // Convenience for IDs 0..n-1.
  static Graph with_dense_ids(std::size_t n, std::span<const EdgeSpec> edges, bool weighted) {
    std::vector<NodeId> ids(n);
    for (std::uint32_t i = 0; i < n; ++i) ids[i] = NodeId{i};
    return Graph(std::move(ids), edges, weighted);
  }

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool weighted() const noexcept { return weighted_; }

  NodeId id(Vertex v) const { return ids_.at(v); }
  std::span<const NodeId> ids() const noexcept { return ids_; }
  NodeId max_id() const noexcept { return ids_.back(); }

  std::optional<Vertex> find(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Vertex index_of(NodeId id) const {
    auto v = find(id);
    if (!v) throw GraphError("unknown node id " + std::to_string(id.value));
    return *v;
  }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(v); }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }

  // Edge indices parallel to neighbors(v).
  std::span<const std::uint32_t> incident_edges(Vertex v) const { return adj_edge_.at(v); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::uint32_t index) const { return edges_.at(index); }

  std::optional<std::uint32_t> edge_index(Vertex a, Vertex b) const {
    if (a >= size() || b >= size()) return std::nullopt;
    const auto& nb = adj_[a];
    auto it = std::lower_bound(nb.begin(), nb.end(), b);
    if (it == nb.end() || *it != b) return std::nullopt;
    return adj_edge_[a][static_cast<std::size_t>(it - nb.begin())];
  }

  bool adjacent(Vertex a, Vertex b) const { return edge_index(a, b).has_value(); }

  std::uint64_t weight(Vertex a, Vertex b) const {
    auto e = edge_index(a, b);
    if (!e) throw GraphError("no edge " + std::to_string(id(a).value) + "-" + std::to_string(id(b).value));
    return edges_[*e].weight;
  }

  IdEdge id_edge(const Edge& e) const { return IdEdge{ids_[e.u], ids_[e.v], e.weight}; }
  IdEdge id_edge(Vertex a, Vertex b) const { return id_edge(edge(edge_index(a, b).value())); }

  bool connected() const {
    std::vector<char> seen(size(), 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : adj_[x]) {
        if (!seen[y]) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    return count == size();
  }

 private:
  std::vector<NodeId> ids_;
  std::unordered_map<NodeId, Vertex> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::vector<std::uint32_t>> adj_edge_;
  bool weighted_ = false;
};

// Directed graph over the node set of a communication graph. Each node's
// input in Distance_k-style problems is its set of outgoing arcs.
class DirectedOverlay {
 public:
  DirectedOverlay() = default;

  DirectedOverlay(const Graph& base, std::span<const std::pair<NodeId, NodeId>> arcs) : out_(base.size()) {
    for (const auto& [from, to] : arcs) {
      const Vertex a = base.index_of(from);
      const Vertex b = base.index_of(to);
      if (std::find(out_[a].begin(), out_[a].end(), to) != out_[a].end())
        throw GraphError("duplicate arc " + std::to_string(from.value) + "->" + std::to_string(to.value));
      out_[a].push_back(to);
      (void)b;
    }
    for (auto& list : out_) std::sort(list.begin(), list.end());
  }

  std::size_t size() const noexcept { return out_.size(); }
  std::span<const NodeId> out(Vertex v) const { return out_.at(v); }

  std::size_t max_out_degree() const {
    std::size_t best = 0;
    for (const auto& list : out_) best = std::max(best, list.size());
    return best;
  }

  std::size_t arc_count() const {
    return std::accumulate(out_.begin(), out_.end(), std::size_t{0},
                           [](std::size_t acc, const auto& l) { return acc + l.size(); });
  }

 private:
  std::vector<std::vector<NodeId>> out_;
};

}  // namespace congest
