#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "congest/core/graph.hpp"
#include "congest/engine/engine.hpp"

namespace congest {

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// ---------------------------------------------------------------------------
// BFS flood of a fixed payload from a root. Chunk c (X words) leaves the root
// in round c; a node at depth d receives it in round d + c and forwards it in
// the same step. The first sender heard from (lowest ID) becomes the parent.

struct FloodNodeOutput {
  std::optional<NodeId> parent;
  std::uint64_t depth = 0;
  std::vector<Word> payload;
};

class FloodProgram {
 public:
  struct Input {
    bool is_root = false;
  };
  struct State {
    bool is_root = false;
    std::optional<Vertex> parent;
    std::uint64_t depth = 0;
    std::vector<Word> payload;
    std::uint64_t chunks = 0;
  };
  using Output = FloodNodeOutput;

  FloodProgram(std::vector<Word> payload, std::uint64_t words_per_round)
      : payload_(std::move(payload)), chunk_words_(words_per_round) {}

  std::uint64_t chunk_count() const { return ceil_div(payload_.size(), chunk_words_); }

  State init(NodeContext&, const Input& in) const {
    State s;
    s.is_root = in.is_root;
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t round, std::span<const Envelope> inbox, Outbox& out) const {
    const std::uint64_t total = chunk_count();
    if (s.is_root) {
      if (round < total) {
        auto chunk = slice(round);
        for (Vertex nb : ctx.neighbors()) out.send(nb, chunk);
        if (round + 1 == total) s.payload = payload_;
      }
      return round + 1 >= total ? Status::halted : Status::running;
    }
    if (inbox.empty()) return Status::running;
    if (!s.parent) {
      s.parent = inbox.front().from;
      s.depth = round;
    }
    for (const auto& env : inbox) {
      if (env.from != *s.parent) continue;
      s.payload.insert(s.payload.end(), env.payload.begin(), env.payload.end());
      ++s.chunks;
      for (Vertex nb : ctx.neighbors()) {
        if (std::any_of(inbox.begin(), inbox.end(), [&](const Envelope& e) { return e.from == nb; })) continue;
        out.send(nb, env.payload);
      }
    }
    return s.chunks >= total ? Status::halted : Status::running;
  }

  Output output(const NodeContext& ctx, const State& s) const {
    Output o;
    if (s.parent) o.parent = ctx.id_of(*s.parent);
    o.depth = s.depth;
    o.payload = s.payload;
    return o;
  }

 private:
  std::vector<Word> slice(std::uint64_t chunk) const {
    const std::size_t begin = chunk * chunk_words_;
    const std::size_t end = std::min<std::size_t>(payload_.size(), begin + chunk_words_);
    return {payload_.begin() + static_cast<std::ptrdiff_t>(begin), payload_.begin() + static_cast<std::ptrdiff_t>(end)};
  }

  std::vector<Word> payload_;
  std::uint64_t chunk_words_;
};

struct FloodResult {
  std::vector<FloodNodeOutput> nodes;  // by vertex
  RunTrace trace;
};

inline FloodResult broadcast_flood(const Graph& g, NodeId root, std::vector<Word> payload, const BandwidthConfig& cfg,
                                   std::uint64_t seed = 0, const RunOptions& options = {}) {
  if (payload.empty()) throw ConfigError("flood payload must have at least one word");
  const Vertex r = g.index_of(root);
  std::vector<FloodProgram::Input> inputs(g.size());
  inputs[r].is_root = true;
  FloodProgram program(std::move(payload), cfg.words_per_round());
  const std::uint64_t budget = g.size() + program.chunk_count() + 2;
  auto res = run(g, program, inputs, cfg, seed, budget, options);
  return {std::move(res.outputs), std::move(res.trace)};
}

// Flood of `payload_words` words whose content is the root ID followed by 1, 2, ...
inline FloodResult broadcast_flood(const Graph& g, NodeId root, std::uint64_t payload_words, const BandwidthConfig& cfg,
                                   std::uint64_t seed = 0, const RunOptions& options = {}) {
  std::vector<Word> payload(payload_words);
  for (std::uint64_t i = 0; i < payload_words; ++i) payload[i] = i == 0 ? root.value : i;
  return broadcast_flood(g, root, std::move(payload), cfg, seed, options);
}

// ---------------------------------------------------------------------------
// Rooted spanning tree known locally: each node knows its parent (if any) and
// its children, as neighbor indices.

struct BfsTree {
  Vertex root = 0;
  std::vector<std::optional<Vertex>> parent;
  std::vector<std::vector<Vertex>> children;
  std::vector<std::uint64_t> depth;
  std::uint64_t height = 0;
  RunTrace trace;
};

namespace detail {

// One exchange round: every non-root node tells its parent "I am your child".
class ParentAnnounceProgram {
 public:
  struct Input {
    std::optional<Vertex> parent;
  };
  struct State {
    std::optional<Vertex> parent;
    std::vector<Vertex> children;
  };
  using Output = std::vector<Vertex>;

  State init(NodeContext&, const Input& in) const { return State{in.parent, {}}; }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t round, std::span<const Envelope> inbox, Outbox& out) const {
    if (round == 0) {
      if (s.parent) out.send(*s.parent, {ctx.id().value});
      return ctx.neighbors().empty() ? Status::halted : Status::running;
    }
    for (const auto& env : inbox) s.children.push_back(env.from);
    return Status::halted;
  }

  Output output(const NodeContext&, const State& s) const { return s.children; }
};

}  // namespace detail

inline BfsTree build_bfs_tree(const Graph& g, NodeId root, const BandwidthConfig& cfg, std::uint64_t seed = 0,
                              const RunOptions& options = {}) {
  BfsTree tree;
  tree.root = g.index_of(root);
  auto flood = broadcast_flood(g, root, std::vector<Word>{root.value}, cfg, seed, options);
  tree.parent.resize(g.size());
  tree.depth.resize(g.size());
  std::vector<detail::ParentAnnounceProgram::Input> inputs(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    if (flood.nodes[v].parent) tree.parent[v] = g.index_of(*flood.nodes[v].parent);
    tree.depth[v] = flood.nodes[v].depth;
    tree.height = std::max(tree.height, tree.depth[v]);
    inputs[v].parent = tree.parent[v];
  }
  auto announce = run(g, detail::ParentAnnounceProgram{}, inputs, cfg, seed, 4, options);
  tree.children = std::move(announce.outputs);
  tree.trace = std::move(flood.trace);
  tree.trace.append(announce.trace);
  return tree;
}

// ---------------------------------------------------------------------------
// Convergecast of integer sums up a rooted tree.
//
// Without known children a node first learns them: in round 0 every node
// sends a one-word "not your child" notice to each non-parent neighbor, so by
// round 1 the children are exactly the silent non-parent neighbors. Only
// sums travel after round 0, so message type follows from the round index.

struct ConvergecastNodeOutput {
  std::int64_t subtree_sum = 0;
  std::vector<std::pair<NodeId, std::int64_t>> child_sums;  // ascending child ID
};

class ConvergecastProgram {
 public:
  struct Input {
    std::optional<Vertex> parent;
    std::int64_t value = 0;
    std::optional<std::vector<Vertex>> children;  // known from an earlier phase
  };
  struct State {
    std::optional<Vertex> parent;
    std::int64_t sum = 0;
    bool children_known = false;
    std::vector<Vertex> children;
    std::vector<std::pair<Vertex, std::int64_t>> reports;
    bool sent = false;
  };
  using Output = ConvergecastNodeOutput;

  State init(NodeContext&, const Input& in) const {
    State s;
    s.parent = in.parent;
    s.sum = in.value;
    if (in.children) {
      s.children_known = true;
      s.children = *in.children;
      std::sort(s.children.begin(), s.children.end());
    }
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t round, std::span<const Envelope> inbox, Outbox& out) const {
    if (!s.children_known) {
      if (round == 0) {
        for (Vertex nb : ctx.neighbors())
          if (nb != s.parent) out.send(nb, {ctx.id().value});
        // An isolated root has nothing to learn.
        if (ctx.neighbors().empty()) {
          s.children_known = true;
          return Status::halted;
        }
        return Status::running;
      }
      if (round == 1) {
        for (Vertex nb : ctx.neighbors()) {
          if (nb == s.parent) continue;
          const bool notice = std::any_of(inbox.begin(), inbox.end(), [&](const Envelope& e) { return e.from == nb; });
          if (!notice) s.children.push_back(nb);
        }
        s.children_known = true;
        inbox = {};
      }
    }
    for (const auto& env : inbox) s.reports.emplace_back(env.from, static_cast<std::int64_t>(env.payload.at(0)));
    if (s.reports.size() < s.children.size()) return Status::running;
    std::int64_t total = s.sum;
    for (const auto& [child, value] : s.reports) total += value;
    s.sum = total;
    if (s.parent) out.send(*s.parent, {static_cast<Word>(total)});
    s.sent = true;
    return Status::halted;
  }

  Output output(const NodeContext& ctx, const State& s) const {
    Output o;
    o.subtree_sum = s.sum;
    for (const auto& [child, value] : s.reports) o.child_sums.emplace_back(ctx.id_of(child), value);
    std::sort(o.child_sums.begin(), o.child_sums.end());
    return o;
  }
};

struct ConvergecastResult {
  std::int64_t root_total = 0;
  std::vector<ConvergecastNodeOutput> nodes;  // by vertex
  RunTrace trace;
};

// Checks that `parent` encodes a rooted spanning tree over edges of g and
// returns the root.
inline Vertex validate_parent_map(const Graph& g, std::span<const std::optional<NodeId>> parent) {
  if (parent.size() != g.size()) throw TopologyError("parent map must cover every node");
  std::optional<Vertex> root;
  std::vector<std::optional<Vertex>> up(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!parent[v]) {
      if (root) throw TopologyError("parent map has more than one root");
      root = v;
      continue;
    }
    auto p = g.find(*parent[v]);
    if (!p || !g.adjacent(v, *p)) throw TopologyError("parent of node " + std::to_string(g.id(v).value) + " is not a neighbor");
    up[v] = *p;
  }
  if (!root) throw TopologyError("parent map has no root");
  for (Vertex v = 0; v < g.size(); ++v) {
    Vertex x = v;
    std::size_t steps = 0;
    while (up[x]) {
      x = *up[x];
      if (++steps > g.size()) throw TopologyError("parent map contains a cycle");
    }
  }
  return *root;
}

inline ConvergecastResult convergecast_sum(const Graph& g, std::span<const std::optional<NodeId>> parent,
                                           std::span<const std::int64_t> values, const BandwidthConfig& cfg,
                                           std::uint64_t seed = 0, const RunOptions& options = {}) {
  const Vertex root = validate_parent_map(g, parent);
  if (values.size() != g.size()) throw ConfigError("one value per node is required");
  std::vector<ConvergecastProgram::Input> inputs(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    if (parent[v]) inputs[v].parent = g.index_of(*parent[v]);
    inputs[v].value = values[v];
  }
  auto res = run(g, ConvergecastProgram{}, inputs, cfg, seed, g.size() + 3, options);
  ConvergecastResult out;
  out.root_total = res.outputs[root].subtree_sum;
  out.nodes = std::move(res.outputs);
  out.trace = std::move(res.trace);
  return out;
}

// Variant over a tree whose children are already known locally.
inline ConvergecastResult convergecast_sum(const Graph& g, const BfsTree& tree, std::span<const std::int64_t> values,
                                           const BandwidthConfig& cfg, std::uint64_t seed = 0,
                                           const RunOptions& options = {}) {
  std::vector<ConvergecastProgram::Input> inputs(g.size());
  for (Vertex v = 0; v < g.size(); ++v) inputs[v] = {tree.parent[v], values[v], tree.children[v]};
  auto res = run(g, ConvergecastProgram{}, inputs, cfg, seed, g.size() + 3, options);
  ConvergecastResult out;
  out.root_total = res.outputs[tree.root].subtree_sum;
  out.nodes = std::move(res.outputs);
  out.trace = std::move(res.trace);
  return out;
}

}  // namespace congest
