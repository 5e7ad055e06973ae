#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "congest/core/oracles.hpp"
#include "congest/core/union_find.hpp"
#include "congest/engine/primitives.hpp"

namespace congest {

// Minimum spanning tree in two stages. A controlled Borůvka phase grows
// fragments until each has at least k+1 nodes; then candidate inter-fragment
// edges stream up a BFS tree in non-decreasing weight order, with every node
// dropping edges that close a cycle over fragment IDs. The root picks the
// connecting edges and streams them back down.

class MstStallError : public EngineError {
 public:
  MstStallError(std::uint64_t round, NodeId node, std::uint64_t available, std::uint64_t needed)
      : EngineError("pipeline stall at node " + std::to_string(node.value) + " in round " + std::to_string(round) +
                    ": " + std::to_string(available) + " candidates, " + std::to_string(needed) + " needed"),
        round(round),
        node(node) {}
  std::uint64_t round;
  NodeId node;
};

inline constexpr std::uint64_t kCandidateWords = 5;

inline std::uint64_t candidates_per_round(std::uint64_t x) { return x / kCandidateWords; }

inline std::uint64_t choose_k(std::uint64_t n, std::uint64_t x) {
  const auto k = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n) / static_cast<double>(x))));
  return std::max<std::uint64_t>(1, k);
}

// Node-local fragment knowledge.
struct FragmentView {
  NodeId fragment;
  std::optional<Vertex> parent;  // inside the fragment tree
  std::vector<Vertex> children;
  std::vector<NodeId> neighbor_fragment;  // aligned with the node's neighbor list
};

struct FragmentPhaseResult {
  std::uint64_t k = 1;
  std::uint64_t merge_phases = 0;  // phases actually run
  std::vector<FragmentView> nodes;  // by vertex
  RunTrace trace;

  std::size_t fragment_count() const {
    std::vector<NodeId> ids;
    for (const auto& v : nodes) ids.push_back(v.fragment);
    std::sort(ids.begin(), ids.end());
    return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
  }

  // Fragment-internal edges, each listed once.
  std::vector<IdEdge> internal_edges(const Graph& g) const {
    std::vector<IdEdge> out;
    for (Vertex v = 0; v < nodes.size(); ++v)
      if (nodes[v].parent) out.push_back(g.id_edge(v, *nodes[v].parent));
    std::sort(out.begin(), out.end());
    return out;
  }
};

namespace detail {

// Lightest outgoing edge of each fragment, and its size, gathered at the fragment root.
// Message: [weight (0 = none), inside endpoint, outside endpoint, size].
struct Outgoing {
  std::uint64_t weight = 0;
  NodeId inside;
  NodeId outside;
  std::uint64_t size = 1;
};

class OutgoingConvergecast {
 public:
  struct Input {
    const FragmentView* view = nullptr;
  };
  struct State {
    std::optional<Vertex> parent;
    std::size_t waiting = 0;
    Outgoing best;
  };
  using Output = Outgoing;

  State init(NodeContext& ctx, const Input& in) const {
    State s;
    s.parent = in.view->parent;
    s.waiting = in.view->children.size();
    const auto nbs = ctx.neighbors();
    for (std::size_t i = 0; i < nbs.size(); ++i) {
      if (in.view->neighbor_fragment[i] == in.view->fragment) continue;
      const auto w = ctx.weight_to(nbs[i]);
      if (s.best.weight == 0 || w < s.best.weight) s.best = {w, ctx.id(), ctx.id_of(nbs[i]), 1};
    }
    return s;
  }

  Status on_round(NodeContext&, State& s, std::uint64_t, std::span<const Envelope> inbox, Outbox& out) const {
    for (const auto& env : inbox) {
      const auto& p = env.payload;
      s.best.size += p.at(3);
      if (p[0] != 0 && (s.best.weight == 0 || p[0] < s.best.weight)) {
        s.best.weight = p[0];
        s.best.inside = NodeId{static_cast<std::uint32_t>(p[1])};
        s.best.outside = NodeId{static_cast<std::uint32_t>(p[2])};
      }
      --s.waiting;
    }
    if (s.waiting > 0) return Status::running;
    if (s.parent) out.send(*s.parent, {s.best.weight, s.best.inside.value, s.best.outside.value, s.best.size});
    return Status::halted;
  }

  Output output(const NodeContext&, const State& s) const { return s.best; }
};

enum class FragmentDecision : Word { stay = 0, propose = 1, spanning = 2 };

struct Decision {
  FragmentDecision kind = FragmentDecision::stay;
  NodeId inside;
  NodeId outside;
};

// Root's decision travels down the fragment tree as [kind, inside, outside].
// The inside endpoint of a proposing fragment then sends a one-word connect
// over the chosen edge. Nodes sleep once the decision has passed, waking only
// for connects from other fragments.
class DecisionAndConnect {
 public:
  struct Input {
    const FragmentView* view = nullptr;
    std::optional<Decision> decided;  // set at fragment roots
  };
  struct State {
    std::optional<Vertex> parent;
    std::vector<Vertex> children;
    std::optional<Decision> decided;
    std::optional<Vertex> sent_to;
    std::vector<Vertex> received_from;
  };
  struct Output {
    Decision decision;
    std::optional<Vertex> sent_to;
    std::vector<Vertex> received_from;
  };

  State init(NodeContext&, const Input& in) const {
    State s;
    s.parent = in.view->parent;
    s.children = in.view->children;
    s.decided = in.decided;
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t round, std::span<const Envelope> inbox, Outbox& out) const {
    bool fresh = round == 0 && s.decided.has_value();
    for (const auto& env : inbox) {
      if (s.parent && env.from == *s.parent) {
        const auto& p = env.payload;
        s.decided = Decision{static_cast<FragmentDecision>(p.at(0)), NodeId{static_cast<std::uint32_t>(p.at(1))},
                             NodeId{static_cast<std::uint32_t>(p.at(2))}};
        fresh = true;
      } else {
        s.received_from.push_back(env.from);
      }
    }
    if (!s.decided) return Status::running;
    if (fresh) {
      for (Vertex c : s.children)
        out.send(c, {static_cast<Word>(s.decided->kind), s.decided->inside.value, s.decided->outside.value});
      if (s.decided->kind == FragmentDecision::propose && s.decided->inside == ctx.id()) {
        s.sent_to = ctx.neighbor_by_id(s.decided->outside).value();
        out.send(*s.sent_to, {ctx.id().value});
      }
    }
    return Status::idle;
  }

  Output output(const NodeContext&, const State& s) const { return {*s.decided, s.sent_to, s.received_from}; }
};

// Relabelling after a merge. Nodes of fragments that stayed keep their label
// and tree; so does the endpoint of a mutual choice on the smaller-label side.
// Their labels spread over the merged tree edges, and the sender of the first
// label a node receives becomes its parent, which re-roots absorbed fragments.
// Every node announces its final label to all other neighbors, so the
// exchange of labels for the next phase rides on the same messages.
class RelabelAndAnnounce {
 public:
  struct Input {
    std::vector<Vertex> tree_neighbors;  // old fragment tree plus chosen edges
    std::optional<NodeId> keep;          // label known up front
    std::optional<Vertex> kept_parent;
  };
  struct State {
    std::vector<Vertex> tree_neighbors;
    std::optional<NodeId> fragment;
    std::optional<Vertex> parent;
    std::vector<std::optional<NodeId>> seen;  // aligned with neighbors
    bool announced = false;
  };
  struct Output {
    NodeId fragment;
    std::optional<Vertex> parent;
    std::vector<Vertex> children;
    std::vector<NodeId> neighbor_fragment;
  };

  State init(NodeContext& ctx, const Input& in) const {
    State s;
    s.tree_neighbors = in.tree_neighbors;
    std::sort(s.tree_neighbors.begin(), s.tree_neighbors.end());
    s.tree_neighbors.erase(std::unique(s.tree_neighbors.begin(), s.tree_neighbors.end()), s.tree_neighbors.end());
    s.fragment = in.keep;
    s.parent = in.kept_parent;
    s.seen.resize(ctx.neighbors().size());
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t, std::span<const Envelope> inbox, Outbox& out) const {
    const auto nbs = ctx.neighbors();
    auto slot = [&](Vertex nb) { return static_cast<std::size_t>(std::lower_bound(nbs.begin(), nbs.end(), nb) - nbs.begin()); };
    for (const auto& env : inbox) {
      const NodeId label{static_cast<std::uint32_t>(env.payload.at(0))};
      s.seen[slot(env.from)] = label;
      if (!s.fragment && std::binary_search(s.tree_neighbors.begin(), s.tree_neighbors.end(), env.from)) {
        s.fragment = label;
        s.parent = env.from;
      }
    }
    if (!s.fragment) return Status::running;
    if (!s.announced) {
      s.announced = true;
      // the merged tree is one fragment
      for (Vertex nb : s.tree_neighbors) s.seen[slot(nb)] = *s.fragment;
      for (Vertex nb : nbs)
        if (nb != s.parent) out.send(nb, {s.fragment->value});
    }
    const bool all = std::all_of(s.seen.begin(), s.seen.end(), [](const auto& x) { return x.has_value(); });
    return all ? Status::halted : Status::running;
  }

  Output output(const NodeContext&, const State& s) const {
    Output o{*s.fragment, s.parent, {}, {}};
    for (Vertex nb : s.tree_neighbors)
      if (nb != s.parent) o.children.push_back(nb);
    for (const auto& x : s.seen) o.neighbor_fragment.push_back(*x);
    return o;
  }
};

template <class Program>
auto run_step(const Graph& g, const Program& program, const std::vector<typename Program::Input>& inputs,
              const BandwidthConfig& cfg, std::uint64_t seed, const RunOptions& options, RunTrace& trace) {
  auto res = run(g, program, inputs, cfg, seed, 2 * g.size() + 4, options);
  trace.append(res.trace);
  return std::move(res.outputs);
}

}  // namespace detail

inline std::uint64_t merge_phase_count(std::uint64_t k) {
  std::uint64_t p = 0;
  while ((std::uint64_t{1} << p) < k + 1) ++p;
  return p;
}

// Controlled Borůvka: in each of ceil(log2(k+1)) phases, only fragments with
// fewer than k+1 nodes propose their lightest outgoing edge. Every phase
// at least doubles the smallest fragment, so afterwards all fragments have
// k+1 or more nodes, or one fragment spans the graph.
inline FragmentPhaseResult fragment_phase(const Graph& g, std::uint64_t k, const BandwidthConfig& cfg,
                                          std::uint64_t seed = 0, const RunOptions& options = {}) {
  if (k == 0) throw ConfigError("fragment size parameter k must be at least 1");
  require_distinct_weights(g);
  const std::size_t n = g.size();
  FragmentPhaseResult out;
  out.k = k;
  out.nodes.resize(n);
  // Singletons: labels are IDs, which neighbors already know.
  for (Vertex v = 0; v < n; ++v) {
    out.nodes[v].fragment = g.id(v);
    for (Vertex nb : g.neighbors(v)) out.nodes[v].neighbor_fragment.push_back(g.id(nb));
  }

  const std::uint64_t phases = merge_phase_count(k);
  for (std::uint64_t phase = 0; phase < phases && n > 1; ++phase) {
    auto& views = out.nodes;
    std::vector<detail::OutgoingConvergecast::Input> up(n);
    for (Vertex v = 0; v < n; ++v) up[v].view = &views[v];
    auto best = detail::run_step(g, detail::OutgoingConvergecast{}, up, cfg, seed, options, out.trace);

    std::vector<detail::DecisionAndConnect::Input> down(n);
    for (Vertex v = 0; v < n; ++v) {
      down[v].view = &views[v];
      if (views[v].parent) continue;
      detail::Decision d{detail::FragmentDecision::stay, best[v].inside, best[v].outside};
      if (best[v].weight == 0)
        d.kind = detail::FragmentDecision::spanning;
      else if (best[v].size < k + 1)
        d.kind = detail::FragmentDecision::propose;
      down[v].decided = d;
    }
    auto links = detail::run_step(g, detail::DecisionAndConnect{}, down, cfg, seed, options, out.trace);
    ++out.merge_phases;
    if (links[0].decision.kind == detail::FragmentDecision::spanning) break;

    std::vector<detail::RelabelAndAnnounce::Input> relabel(n);
    for (Vertex v = 0; v < n; ++v) {
      auto& in = relabel[v];
      const auto& view = views[v];
      if (view.parent) in.tree_neighbors.push_back(*view.parent);
      in.tree_neighbors.insert(in.tree_neighbors.end(), view.children.begin(), view.children.end());
      if (links[v].sent_to) in.tree_neighbors.push_back(*links[v].sent_to);
      in.tree_neighbors.insert(in.tree_neighbors.end(), links[v].received_from.begin(), links[v].received_from.end());
      if (links[v].decision.kind != detail::FragmentDecision::propose) {
        in.keep = view.fragment;
        in.kept_parent = view.parent;
      } else if (links[v].sent_to) {
        const Vertex w = *links[v].sent_to;
        const auto& from = links[v].received_from;
        const bool mutual = std::find(from.begin(), from.end(), w) != from.end();
        const auto nbs = g.neighbors(v);
        const auto slot = static_cast<std::size_t>(std::lower_bound(nbs.begin(), nbs.end(), w) - nbs.begin());
        if (mutual && view.fragment < view.neighbor_fragment[slot]) in.keep = view.fragment;
      }
    }
    auto labels = detail::run_step(g, detail::RelabelAndAnnounce{}, relabel, cfg, seed, options, out.trace);
    for (Vertex v = 0; v < n; ++v) {
      views[v].fragment = labels[v].fragment;
      views[v].parent = labels[v].parent;
      views[v].children = std::move(labels[v].children);
      views[v].neighbor_fragment = std::move(labels[v].neighbor_fragment);
    }
  }
  return out;
}

// Every node its own fragment; no communication needed since neighbor IDs are local knowledge.
inline FragmentPhaseResult singleton_fragments(const Graph& g) {
  FragmentPhaseResult out;
  out.k = 0;
  out.nodes.resize(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    out.nodes[v].fragment = g.id(v);
    for (Vertex nb : g.neighbors(v)) out.nodes[v].neighbor_fragment.push_back(g.id(nb));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pipelined upcast of candidate edges.

struct CandidateEdge {
  NodeId u, v;  // u < v
  std::uint64_t weight = 0;
  NodeId fu, fv;

  auto operator<=>(const CandidateEdge& o) const { return weight <=> o.weight; }
  bool operator==(const CandidateEdge& o) const { return weight == o.weight; }

  IdEdge edge() const { return {u, v, weight}; }
  void encode(std::vector<Word>& out) const {
    out.insert(out.end(), {Word{u.value}, Word{v.value}, weight, Word{fu.value}, Word{fv.value}});
  }
  static CandidateEdge decode(std::span<const Word> w) {
    auto id = [](Word x) { return NodeId{static_cast<std::uint32_t>(x)}; };
    return {id(w[0]), id(w[1]), w[2], id(w[3]), id(w[4])};
  }
};

namespace detail {

// A batch is 5-word candidates, optionally followed by a one-word done marker.
inline std::vector<CandidateEdge> decode_batch(std::span<const Word> payload, bool& done) {
  done = payload.size() % kCandidateWords == 1;
  std::vector<CandidateEdge> out;
  for (std::size_t i = 0; i + kCandidateWords <= payload.size(); i += kCandidateWords)
    out.push_back(CandidateEdge::decode(payload.subspan(i, kCandidateWords)));
  return out;
}

class PipelineProgram {
 public:
  struct Input {
    std::optional<Vertex> parent;
    std::vector<Vertex> children;
    std::vector<CandidateEdge> pool;
  };
  struct State {
    std::optional<Vertex> parent;
    std::vector<Vertex> children;  // ascending
    std::vector<char> child_done;
    std::vector<char> heard;
    std::vector<std::uint64_t> last_weight;
    std::vector<CandidateEdge> pool;  // min-heap by weight
    LabelUnionFind forest;
    bool started = false;
    bool finished = false;
    bool done_pending = false;  // done marker waits for room
    std::vector<CandidateEdge> received;  // root only, arrival order
  };
  using Output = std::vector<CandidateEdge>;

  State init(NodeContext&, const Input& in) const {
    State s;
    s.parent = in.parent;
    s.children = in.children;
    std::sort(s.children.begin(), s.children.end());
    s.child_done.assign(s.children.size(), 0);
    s.heard.assign(s.children.size(), 0);
    s.last_weight.assign(s.children.size(), 0);
    s.pool = in.pool;
    std::make_heap(s.pool.begin(), s.pool.end(), std::greater<>{});
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t round, std::span<const Envelope> inbox, Outbox& out) const {
    for (const auto& env : inbox) {
      const auto slot = static_cast<std::size_t>(std::lower_bound(s.children.begin(), s.children.end(), env.from) -
                                                 s.children.begin());
      bool done = false;
      auto batch = decode_batch(env.payload, done);
      s.heard[slot] = 1;
      if (done) s.child_done[slot] = 1;
      for (const auto& c : batch) {
        s.last_weight[slot] = c.weight;
        if (s.parent) {
          s.pool.push_back(c);
          std::push_heap(s.pool.begin(), s.pool.end(), std::greater<>{});
        } else {
          s.received.push_back(c);
        }
      }
    }
    const bool all_done = std::all_of(s.child_done.begin(), s.child_done.end(), [](char c) { return c != 0; });
    if (!s.parent) return all_done ? Status::halted : Status::running;

    if (s.done_pending) {
      out.send(*s.parent, {Word{1}});
      return Status::halted;
    }
    if (!s.started) {
      s.started = std::all_of(s.heard.begin(), s.heard.end(), [](char c) { return c != 0; });
      if (!s.started) return Status::running;
    }

    // Eligible: at most the lightest last-received weight over unfinished children.
    std::optional<std::uint64_t> threshold;
    for (std::size_t i = 0; i < s.children.size(); ++i)
      if (!s.child_done[i]) threshold = threshold ? std::min(*threshold, s.last_weight[i]) : s.last_weight[i];

    const std::uint64_t q = candidates_per_round(ctx.words_per_round());
    std::vector<Word> payload;
    std::uint64_t picked = 0;
    while (picked < q && !s.pool.empty() && (!threshold || s.pool.front().weight <= *threshold)) {
      std::pop_heap(s.pool.begin(), s.pool.end(), std::greater<>{});
      CandidateEdge c = s.pool.back();
      s.pool.pop_back();
      if (!s.forest.unite(c.fu.value, c.fv.value)) continue;
      c.encode(payload);
      ++picked;
    }
    if (threshold && picked < q) throw MstStallError(round, ctx.id(), picked, q);

    const bool exhausted = all_done && s.pool.empty();
    if (exhausted) {
      if (payload.size() + 1 <= ctx.words_per_round()) {
        payload.push_back(1);
        out.send(*s.parent, std::move(payload));
        return Status::halted;
      }
      s.done_pending = true;
    }
    if (!payload.empty()) out.send(*s.parent, std::move(payload));
    return Status::running;
  }

  Output output(const NodeContext&, const State& s) const { return s.received; }
};

// Chosen edges travel down the tree in batches; the last batch carries the done marker.
class EdgeDowncast {
 public:
  struct Input {
    std::optional<Vertex> parent;
    std::vector<Vertex> children;
    std::vector<CandidateEdge> chosen;  // root only
  };
  struct State {
    bool root = false;
    std::vector<Vertex> children;
    std::vector<CandidateEdge> queue;
    std::size_t next = 0;
    std::vector<CandidateEdge> heard;
  };
  using Output = std::vector<CandidateEdge>;

  State init(NodeContext&, const Input& in) const {
    State s;
    s.root = !in.parent;
    s.children = in.children;
    s.queue = in.chosen;
    if (s.root) s.heard = in.chosen;
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t, std::span<const Envelope> inbox, Outbox& out) const {
    if (s.root) {
      const std::uint64_t q = candidates_per_round(ctx.words_per_round());
      std::vector<Word> payload;
      for (std::uint64_t i = 0; i < q && s.next < s.queue.size(); ++i) s.queue[s.next++].encode(payload);
      const bool last = s.next == s.queue.size() && payload.size() + 1 <= ctx.words_per_round();
      if (last) payload.push_back(1);
      for (Vertex c : s.children) out.send(c, payload);
      return last ? Status::halted : Status::running;
    }
    bool done = false;
    for (const auto& env : inbox) {
      auto batch = decode_batch(env.payload, done);
      s.heard.insert(s.heard.end(), batch.begin(), batch.end());
      for (Vertex c : s.children) out.send(c, env.payload);
    }
    return done ? Status::halted : Status::running;
  }

  Output output(const NodeContext&, const State& s) const { return s.heard; }
};

}  // namespace detail

struct PipelineResult {
  BfsTree tree;
  std::vector<CandidateEdge> root_received;  // arrival order
  std::vector<CandidateEdge> root_pool;      // the root's own incident candidates
  RunTrace upcast_trace;
  RunTrace trace;  // tree construction, then the upcast
};

inline std::vector<CandidateEdge> incident_candidates(const Graph& g, Vertex v, const FragmentView& view) {
  std::vector<CandidateEdge> pool;
  const auto nbs = g.neighbors(v);
  for (std::size_t i = 0; i < nbs.size(); ++i) {
    if (view.neighbor_fragment[i] == view.fragment) continue;
    CandidateEdge c{g.id(v), g.id(nbs[i]), g.weight(v, nbs[i]), view.fragment, view.neighbor_fragment[i]};
    if (c.v < c.u) {
      std::swap(c.u, c.v);
      std::swap(c.fu, c.fv);
    }
    pool.push_back(c);
  }
  return pool;
}

inline PipelineResult pipeline_upcast(const Graph& g, std::span<const FragmentView> fragments, const BandwidthConfig& cfg,
                                      std::uint64_t seed = 0, const RunOptions& options = {}) {
  if (candidates_per_round(cfg.words_per_round()) == 0)
    throw ConfigError("candidate edges take 5 words; the pipeline needs X >= 5");
  if (cfg.mode != CongestionMode::strict) throw ConfigError("the pipeline runs in strict mode");
  PipelineResult out;
  out.tree = build_bfs_tree(g, g.ids().front(), cfg, seed, options);
  std::vector<detail::PipelineProgram::Input> inputs(g.size());
  for (Vertex v = 0; v < g.size(); ++v)
    inputs[v] = {out.tree.parent[v], out.tree.children[v], incident_candidates(g, v, fragments[v])};
  out.root_pool = inputs[out.tree.root].pool;
  const std::uint64_t budget = 2 * g.size() + 2 * g.edge_count() + 8;
  auto res = run(g, detail::PipelineProgram{}, inputs, cfg, seed, budget, options);
  out.root_received = std::move(res.outputs[out.tree.root]);
  out.upcast_trace = res.trace;
  out.trace = out.tree.trace;
  out.trace.append(res.trace);
  return out;
}

struct FinalizeResult {
  std::vector<CandidateEdge> chosen;
  std::vector<std::vector<IdEdge>> node_edges;  // incident MST edges, by vertex
  RunTrace trace;
};

// Kruskal at the root over fragment IDs, then a pipelined downcast of the chosen edges.
inline FinalizeResult finalize_and_broadcast(const Graph& g, const PipelineResult& pipe,
                                             std::span<const FragmentView> fragments, const BandwidthConfig& cfg,
                                             std::uint64_t seed = 0, const RunOptions& options = {}) {
  FinalizeResult out;
  std::vector<CandidateEdge> all = pipe.root_received;
  all.insert(all.end(), pipe.root_pool.begin(), pipe.root_pool.end());
  std::sort(all.begin(), all.end());
  LabelUnionFind forest;
  for (const auto& c : all)
    if (forest.unite(c.fu.value, c.fv.value)) out.chosen.push_back(c);

  std::vector<NodeId> ids;
  for (const auto& f : fragments) ids.push_back(f.fragment);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (out.chosen.size() + 1 != ids.size())
    throw EngineError("received candidates connect " + std::to_string(out.chosen.size() + 1) + " of " +
                      std::to_string(ids.size()) + " fragments");

  std::vector<detail::EdgeDowncast::Input> inputs(g.size());
  for (Vertex v = 0; v < g.size(); ++v) inputs[v] = {pipe.tree.parent[v], pipe.tree.children[v], {}};
  inputs[pipe.tree.root].chosen = out.chosen;
  const std::uint64_t budget = 2 * g.size() + out.chosen.size() + 8;
  auto res = run(g, detail::EdgeDowncast{}, inputs, cfg, seed, budget, options);
  out.trace = std::move(res.trace);

  out.node_edges.resize(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    auto& mine = out.node_edges[v];
    if (fragments[v].parent) mine.push_back(g.id_edge(v, *fragments[v].parent));
    for (Vertex c : fragments[v].children) mine.push_back(g.id_edge(v, c));
    for (const auto& c : res.outputs[v])
      if (c.u == g.id(v) || c.v == g.id(v)) mine.push_back(c.edge());
    std::sort(mine.begin(), mine.end());
  }
  return out;
}

struct MstResult {
  std::uint64_t k = 1;
  std::size_t fragments = 0;
  std::vector<std::vector<IdEdge>> node_edges;  // by vertex
  std::vector<IdEdge> edges;                    // union, sorted
  std::uint64_t rounds_fragment = 0;
  std::uint64_t rounds_pipeline = 0;
  std::uint64_t rounds_finalize = 0;
  std::uint64_t rounds_total = 0;
  RunTrace trace;
};

inline MstResult run_mst(const Graph& g, const BandwidthConfig& cfg, std::uint64_t seed = 0,
                         std::optional<std::uint64_t> k_override = std::nullopt, const RunOptions& options = {}) {
  require_distinct_weights(g);
  const std::uint64_t x = cfg.words_per_round();
  const std::uint64_t q = candidates_per_round(x);
  if (q == 0) throw ConfigError("candidate edges take 5 words; the MST pipeline needs X >= 5");
  MstResult out;
  out.k = k_override.value_or(choose_k(g.size(), x));
  const bool skip = q * out.k * out.k > g.size();
  auto frag = skip ? singleton_fragments(g) : fragment_phase(g, out.k, cfg, seed, options);
  out.fragments = frag.fragment_count();
  auto pipe = pipeline_upcast(g, frag.nodes, cfg, seed, options);
  auto fin = finalize_and_broadcast(g, pipe, frag.nodes, cfg, seed, options);

  out.rounds_fragment = frag.trace.span_rounds();
  out.rounds_pipeline = pipe.trace.span_rounds();
  out.rounds_finalize = fin.trace.span_rounds();
  out.trace = std::move(frag.trace);
  out.trace.append(pipe.trace);
  out.trace.append(fin.trace);
  out.rounds_total = out.trace.rounds_used;

  out.node_edges = std::move(fin.node_edges);
  for (const auto& mine : out.node_edges) out.edges.insert(out.edges.end(), mine.begin(), mine.end());
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

}  // namespace congest
