#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "congest/core/graph.hpp"
#include "congest/core/rng.hpp"

namespace congest {

enum class GraphKind { erdos_renyi, path, star, grid, tree_plus_chords };

// Parameters for one generator call. Unused fields are ignored:
// erdos_renyi(n, p), path(n), star(n), grid(rows, cols), tree_plus_chords(n, chords).
struct GraphSpec {
  GraphKind kind = GraphKind::path;
  std::size_t n = 1;
  double p = 0.5;
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::size_t chords = 0;

  static GraphSpec erdos_renyi(std::size_t n, double p) { return {GraphKind::erdos_renyi, n, p}; }
  static GraphSpec path(std::size_t n) { return {GraphKind::path, n}; }
  static GraphSpec star(std::size_t n) { return {GraphKind::star, n}; }
  static GraphSpec grid(std::size_t r, std::size_t c) { return {GraphKind::grid, r * c, 0.0, r, c}; }
  static GraphSpec tree_plus_chords(std::size_t n, std::size_t c) {
    return {GraphKind::tree_plus_chords, n, 0.0, 1, 1, c};
  }
};

inline std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::erdos_renyi: return "erdos-renyi";
    case GraphKind::path: return "path";
    case GraphKind::star: return "star";
    case GraphKind::grid: return "grid";
    case GraphKind::tree_plus_chords: return "tree-plus-chords";
  }
  return "unknown";
}

inline GraphKind parse_graph_kind(const std::string& s) {
  if (s == "erdos-renyi" || s == "er") return GraphKind::erdos_renyi;
  if (s == "path") return GraphKind::path;
  if (s == "star") return GraphKind::star;
  if (s == "grid") return GraphKind::grid;
  if (s == "tree-plus-chords") return GraphKind::tree_plus_chords;
  throw std::invalid_argument("unknown graph kind '" + s + "'");
}

class GeneratorError : public std::runtime_error {
 public:
  GeneratorError(const std::string& what, int retries)
      : std::runtime_error(what + " (gave up after " + std::to_string(retries) + " retries)"), retries_(retries) {}
  int retries() const noexcept { return retries_; }

 private:
  int retries_;
};

namespace detail {

inline constexpr int kMaxConnectRetries = 64;

inline std::vector<std::uint64_t> distinct_weights(std::size_t count, std::size_t n, Rng& rng) {
  const std::uint64_t hi = std::max<std::uint64_t>(1, std::uint64_t{n} * n * n);
  if (count > hi) throw std::invalid_argument("not enough distinct weights in [1, n^3]");
  std::unordered_set<std::uint64_t> used;
  std::vector<std::uint64_t> out;
  out.reserve(count);
  while (out.size() < count) {
    const std::uint64_t w = uniform_int(rng, 1, hi);
    if (used.insert(w).second) out.push_back(w);
  }
  return out;
}

inline bool spans(std::size_t n, const std::vector<EdgeSpec>& edges) {
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& e : edges) {
    adj[e.u.value].push_back(e.v.value);
    adj[e.v.value].push_back(e.u.value);
  }
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    for (auto y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        ++count;
        stack.push_back(y);
      }
  }
  return count == n;
}

inline std::vector<EdgeSpec> base_edges(const GraphSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.n;
  std::vector<EdgeSpec> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    edges.push_back({NodeId{static_cast<std::uint32_t>(a)}, NodeId{static_cast<std::uint32_t>(b)}, 1});
  };
  switch (spec.kind) {
    case GraphKind::path:
      for (std::size_t i = 1; i < n; ++i) add(i - 1, i);
      break;
    case GraphKind::star:
      for (std::size_t i = 1; i < n; ++i) add(0, i);
      break;
    case GraphKind::grid:
      for (std::size_t r = 0; r < spec.rows; ++r)
        for (std::size_t c = 0; c < spec.cols; ++c) {
          const std::size_t x = r * spec.cols + c;
          if (c + 1 < spec.cols) add(x, x + 1);
          if (r + 1 < spec.rows) add(x, x + spec.cols);
        }
      break;
    case GraphKind::erdos_renyi: {
      for (int attempt = 0; attempt < kMaxConnectRetries; ++attempt) {
        edges.clear();
        Rng rng = make_rng(seed, 0x4552'0000ULL + static_cast<std::uint64_t>(attempt));
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = a + 1; b < n; ++b)
            if (uniform_real(rng) < spec.p) add(a, b);
        if (spans(n, edges)) return edges;
      }
      throw GeneratorError("erdos-renyi(" + std::to_string(n) + ", " + std::to_string(spec.p) +
                               ") did not produce a connected graph",
                           kMaxConnectRetries);
    }
    case GraphKind::tree_plus_chords: {
      Rng rng = make_rng(seed, 0x5443'0000ULL);
      std::set<std::pair<std::size_t, std::size_t>> present;
      for (std::size_t i = 1; i < n; ++i) {
        const std::size_t parent = uniform_int(rng, 0, i - 1);
        add(parent, i);
        present.emplace(parent, i);
      }
      const std::size_t max_extra = n * (n - 1) / 2 - (n - 1);
      if (spec.chords > max_extra)
        throw std::invalid_argument("tree-plus-chords: more chords requested than node pairs available");
      std::size_t added = 0;
      while (added < spec.chords) {
        std::size_t a = uniform_int(rng, 0, n - 1);
        std::size_t b = uniform_int(rng, 0, n - 1);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!present.emplace(a, b).second) continue;
        add(a, b);
        ++added;
      }
      break;
    }
  }
  return edges;
}

}  // namespace detail

// Deterministic in (spec, seed, weighted). Node IDs are 0..n-1. Weighted graphs
// receive pairwise distinct weights drawn from [1, n^3].
inline Graph generate(const GraphSpec& spec, std::uint64_t seed, bool weighted = false) {
  if (spec.n == 0) throw std::invalid_argument("graph needs at least one node");
  if (spec.kind == GraphKind::grid && (spec.rows == 0 || spec.cols == 0))
    throw std::invalid_argument("grid dimensions must be positive");
  if (spec.kind == GraphKind::erdos_renyi && !(spec.p > 0.0 && spec.p <= 1.0))
    throw std::invalid_argument("erdos-renyi edge probability must be in (0, 1]");

  auto edges = detail::base_edges(spec, seed);
  if (weighted) {
    Rng rng = make_rng(seed, 0x5747'0000ULL);
    std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) {
      return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    const auto w = detail::distinct_weights(edges.size(), spec.n, rng);
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = w[i];
  }
  return Graph::with_dense_ids(spec.n, edges, weighted);
}

// Same topology, fresh distinct weights in [1, n^3].
inline Graph reweight(const Graph& g, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0x5257'0000ULL);
  const auto w = detail::distinct_weights(g.edge_count(), g.size(), rng);
  std::vector<EdgeSpec> edges;
  edges.reserve(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edges()[i];
    edges.push_back({g.id(e.u), g.id(e.v), w[i]});
  }
  return Graph({g.ids().begin(), g.ids().end()}, edges, true);
}

}  // namespace congest
