#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "congest/bcc.hpp"
#include "congest/core/oracles.hpp"
#include "congest/engine/primitives.hpp"

namespace congest {

// Unweighted all-pairs shortest paths by concurrent BFS floods.
//
// Every node gets its first-visit time t in a DFS of a BFS tree (children in
// ascending ID order). Visit times are split into blocks of L = ceil(2n/X)
// consecutive values; a node in block j starts its flood in round
// 2(t - L(j-1)). Within a block, starts spaced by twice the DFS gaps never
// collide at any node, and there are at most X blocks, so at most X tokens
// cross a link direction per round.

struct DfsSchedule {
  std::uint64_t n = 0;
  std::uint64_t words = 1;       // X
  std::uint64_t block_length = 1;  // L
  std::vector<std::uint64_t> visit_time;  // by vertex

  static std::uint64_t block_length_for(std::uint64_t n, std::uint64_t x) { return std::max<std::uint64_t>(1, ceil_div(2 * n, x)); }

  // 1-based block index of a visit time.
  std::uint64_t block_of_time(std::uint64_t t) const { return t / block_length + 1; }
  std::uint64_t start_of_time(std::uint64_t t) const { return 2 * (t - block_length * (block_of_time(t) - 1)); }
  std::uint64_t block(Vertex v) const { return block_of_time(visit_time[v]); }
  std::uint64_t start_round(Vertex v) const { return start_of_time(visit_time[v]); }
};

namespace detail {

// Top-down visit-time assignment: a child's time is 2 * (sizes of earlier
// siblings) + parent's time + 1.
class VisitTimeProgram {
 public:
  struct Input {
    bool is_root = false;
    std::vector<std::pair<Vertex, std::uint64_t>> children;  // (child, subtree size), ascending child
  };
  struct State {
    Input in;
    std::uint64_t t = 0;
  };
  using Output = std::uint64_t;

  State init(NodeContext&, const Input& in) const { return State{in, 0}; }

  Status on_round(NodeContext&, State& s, std::uint64_t, std::span<const Envelope> inbox, Outbox& out) const {
    if (!s.in.is_root) {
      if (inbox.empty()) return Status::running;
      s.t = inbox.front().payload.at(0);
    }
    std::uint64_t before = 0;
    for (const auto& [child, size] : s.in.children) {
      out.send(child, {2 * before + s.t + 1});
      before += size;
    }
    return Status::halted;
  }

  Output output(const NodeContext&, const State& s) const { return s.t; }
};

// Concurrent one-word BFS floods on the block schedule.
class ApspFloodProgram {
 public:
  struct Input {
    std::vector<std::pair<NodeId, Word>> times;  // every node's visit time, ascending ID
  };
  struct State {
    std::vector<std::pair<NodeId, Word>> times;
    std::uint64_t own_start = 0;
    std::unordered_map<std::uint32_t, std::uint64_t> dist;
  };
  using Output = std::vector<std::pair<NodeId, std::uint64_t>>;

  explicit ApspFloodProgram(DfsSchedule shape) : shape_(std::move(shape)) {}

  State init(NodeContext& ctx, const Input& in) const {
    State s;
    s.times = in.times;
    s.own_start = shape_.start_of_time(time_of(s, ctx.id()));
    s.dist.reserve(ctx.network_size());
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t round, std::span<const Envelope> inbox, Outbox& out) const {
    const auto nbs = ctx.neighbors();
    std::vector<std::vector<Word>> outgoing(nbs.size());
    if (round == s.own_start)
      for (auto& o : outgoing) o.push_back(ctx.id().value);

    // Fresh tokens with the neighbors that sent each one this round.
    std::vector<std::pair<Word, Vertex>> fresh;
    for (const auto& env : inbox)
      for (Word token : env.payload) {
        if (token == ctx.id().value || s.dist.contains(static_cast<std::uint32_t>(token))) continue;
        fresh.emplace_back(token, env.from);
      }
    std::sort(fresh.begin(), fresh.end());
    for (std::size_t i = 0; i < fresh.size();) {
      std::size_t j = i;
      while (j < fresh.size() && fresh[j].first == fresh[i].first) ++j;
      const Word token = fresh[i].first;
      const NodeId origin{static_cast<std::uint32_t>(token)};
      s.dist[origin.value] = round - shape_.start_of_time(time_of(s, origin));
      for (std::size_t k = 0; k < nbs.size(); ++k) {
        bool sender = false;
        for (std::size_t q = i; q < j; ++q) sender = sender || fresh[q].second == nbs[k];
        if (!sender) outgoing[k].push_back(token);
      }
      i = j;
    }
    for (std::size_t k = 0; k < nbs.size(); ++k)
      if (!outgoing[k].empty()) out.send(nbs[k], std::move(outgoing[k]));

    const bool done = round >= s.own_start && s.dist.size() + 1 == ctx.network_size();
    return done ? Status::halted : Status::running;
  }

  Output output(const NodeContext& ctx, const State& s) const {
    Output o;
    o.reserve(s.dist.size() + 1);
    o.emplace_back(ctx.id(), 0);
    for (const auto& [id, d] : s.dist) o.emplace_back(NodeId{id}, d);
    std::sort(o.begin(), o.end());
    return o;
  }

 private:
  static std::uint64_t time_of(const State& s, NodeId id) {
    auto it = std::lower_bound(s.times.begin(), s.times.end(), std::make_pair(id, Word{0}));
    if (it == s.times.end() || it->first != id) throw EngineError("no visit time for node " + std::to_string(id.value));
    return it->second;
  }

  DfsSchedule shape_;
};

}  // namespace detail

struct DfsTimesResult {
  DfsSchedule schedule;
  RunTrace trace;  // subtree-size convergecast, then the top-down pass
};

// Visit times on an existing rooted tree. Children are visited in ascending ID order.
inline DfsTimesResult compute_dfs_times(const Graph& g, const BfsTree& tree, const BandwidthConfig& cfg,
                                        std::uint64_t seed = 0, const RunOptions& options = {}) {
  std::vector<std::int64_t> ones(g.size(), 1);
  auto sizes = convergecast_sum(g, tree, ones, cfg, seed, options);
  std::vector<detail::VisitTimeProgram::Input> inputs(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    inputs[v].is_root = v == tree.root;
    for (const auto& [child, size] : sizes.nodes[v].child_sums)
      inputs[v].children.emplace_back(g.index_of(child), static_cast<std::uint64_t>(size));
  }
  auto times = run(g, detail::VisitTimeProgram{}, inputs, cfg, seed, tree.height + 3, options);
  DfsTimesResult out;
  out.schedule.n = g.size();
  out.schedule.words = cfg.words_per_round();
  out.schedule.block_length = DfsSchedule::block_length_for(g.size(), cfg.words_per_round());
  out.schedule.visit_time = std::move(times.outputs);
  out.trace = std::move(sizes.trace);
  out.trace.append(times.trace);
  return out;
}

inline DfsTimesResult compute_dfs_times(const Graph& g, NodeId root, const BandwidthConfig& cfg, std::uint64_t seed = 0,
                                        const RunOptions& options = {}) {
  auto tree = build_bfs_tree(g, root, cfg, seed, options);
  auto res = compute_dfs_times(g, tree, cfg, seed, options);
  tree.trace.append(res.trace);
  res.trace = std::move(tree.trace);
  return res;
}

struct ApspPhaseRounds {
  std::uint64_t tree = 0;
  std::uint64_t visit_times = 0;
  std::uint64_t schedule = 0;
  std::uint64_t floods = 0;
};

struct ApspResult {
  DistanceTable table;
  DfsSchedule schedule;
  ApspPhaseRounds phases;
  RunTrace trace;
};

inline ApspResult run_apsp(const Graph& g, const BandwidthConfig& cfg, std::uint64_t seed = 0,
                           const RunOptions& options = {}) {
  if (g.weighted()) throw ConfigError("all-pairs hop distances expect an unweighted graph");
  if (cfg.mode != CongestionMode::strict) throw ConfigError("the flood schedule runs in strict mode");
  const std::size_t n = g.size();
  ApspResult out;
  out.table = DistanceTable(n);

  auto tree = build_bfs_tree(g, g.ids().front(), cfg, seed, options);
  out.phases.tree = tree.trace.span_rounds();
  auto dfs = compute_dfs_times(g, tree, cfg, seed, options);
  out.phases.visit_times = dfs.trace.span_rounds();
  out.schedule = dfs.schedule;

  std::vector<Word> times(dfs.schedule.visit_time.begin(), dfs.schedule.visit_time.end());
  auto shared = gather_and_relay(g, tree, g.ids(), times, cfg, seed, options);
  out.phases.schedule = shared.trace.span_rounds();

  std::vector<detail::ApspFloodProgram::Input> inputs(n);
  for (Vertex v = 0; v < n; ++v) inputs[v].times = std::move(shared.nodes[v].pairs);
  const std::uint64_t budget = 2 * dfs.schedule.block_length + 2 * n + 4;
  auto floods = run(g, detail::ApspFloodProgram(dfs.schedule), inputs, cfg, seed, budget, options);
  out.phases.floods = floods.trace.span_rounds();

  for (Vertex v = 0; v < n; ++v)
    for (const auto& [id, d] : floods.outputs[v]) out.table.at(v, g.index_of(id)) = d;

  out.trace = std::move(tree.trace);
  out.trace.append(dfs.trace);
  out.trace.append(shared.trace);
  out.trace.append(floods.trace);
  return out;
}

inline constexpr std::uint64_t kApspSetupFactor = 4;  // c0
inline constexpr std::uint64_t kApspRoundFactor = 6;  // c

// Upper bound on run_apsp rounds: c0*D for the tree and visit times, the
// schedule exchange (2D + L + 4), then the floods (2L + D) and slack.
inline std::uint64_t predicted_rounds_apsp(std::uint64_t n, std::uint64_t d, std::uint64_t x) {
  if (n == 0 || x == 0) throw std::invalid_argument("n and X must be positive");
  const std::uint64_t l = DfsSchedule::block_length_for(n, x);
  return kApspSetupFactor * d + (2 * d + l + 4) + (2 * l + d) + 4;
}

}  // namespace congest
