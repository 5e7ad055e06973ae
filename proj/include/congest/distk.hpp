#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "congest/core/graph.hpp"
#include "congest/core/oracles.hpp"
#include "congest/core/rng.hpp"
#include "congest/engine/engine.hpp"

namespace congest {

// Two lists of p pointers, each entry 1-based into the other list.
// The chain starts at Alice's first pointer.
struct PointerInstance {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> alice;
  std::vector<std::uint64_t> bob;

  void validate() const {
    if (p == 0) throw std::invalid_argument("a pointer instance needs p >= 1");
    if (alice.size() != p || bob.size() != p) throw std::invalid_argument("both lists must hold p pointers");
    for (const auto* list : {&alice, &bob})
      for (auto x : *list)
        if (x < 1 || x > p) throw std::invalid_argument("pointer " + std::to_string(x) + " outside [1, p]");
  }

  static PointerInstance random(std::uint64_t p, std::uint64_t seed) {
    Rng rng = make_rng(seed, 0x504f494eULL);
    PointerInstance pi{p, {}, {}};
    for (std::uint64_t i = 0; i < p; ++i) pi.alice.push_back(uniform_int(rng, 1, p));
    for (std::uint64_t i = 0; i < p; ++i) pi.bob.push_back(uniform_int(rng, 1, p));
    return pi;
  }
};

// Two stars joined by the bridge {l, r}. L = {1..p}, R = {p+1..2p},
// l = 2p+1, r = 2p+2.
struct ReductionInstance {
  PointerInstance pointers;
  Graph graph;
  DirectedOverlay overlay;
  NodeId l;
  NodeId r;

  NodeId start() const { return NodeId{1}; }
};

inline ReductionInstance build_reduction(const PointerInstance& pi) {
  pi.validate();
  const auto p = static_cast<std::uint32_t>(pi.p);
  ReductionInstance out;
  out.pointers = pi;
  out.l = NodeId{2 * p + 1};
  out.r = NodeId{2 * p + 2};
  std::vector<NodeId> ids;
  for (std::uint32_t i = 1; i <= 2 * p + 2; ++i) ids.push_back(NodeId{i});
  std::vector<EdgeSpec> edges;
  for (std::uint32_t i = 1; i <= p; ++i) {
    edges.push_back({NodeId{i}, out.l, 1});
    edges.push_back({NodeId{p + i}, out.r, 1});
  }
  edges.push_back({out.l, out.r, 1});
  out.graph = Graph(ids, edges, false);

  std::vector<std::pair<NodeId, NodeId>> arcs;
  for (std::uint32_t i = 1; i <= p; ++i) {
    arcs.emplace_back(NodeId{i}, NodeId{p + static_cast<std::uint32_t>(pi.alice[i - 1])});
    arcs.emplace_back(NodeId{p + i}, NodeId{static_cast<std::uint32_t>(pi.bob[i - 1])});
  }
  arcs.emplace_back(out.l, out.r);
  arcs.emplace_back(out.r, out.l);
  out.overlay = DirectedOverlay(out.graph, arcs);
  return out;
}

// Node reached by the shortest k-arc path from u, or none when the chain
// stops or comes back to a node it already visited before k arcs.
inline std::optional<NodeId> overlay_chain_walk(const Graph& g, const DirectedOverlay& overlay, NodeId u,
                                                std::uint64_t k) {
  std::vector<bool> seen(g.size());
  NodeId at = u;
  seen[g.index_of(at)] = true;
  for (std::uint64_t i = 0; i < k; ++i) {
    auto next = overlay.out(g.index_of(at));
    if (next.empty()) return std::nullopt;
    at = next.front();
    if (seen[g.index_of(at)]) return std::nullopt;
    seen[g.index_of(at)] = true;
  }
  return at;
}

// Follows the pointers directly: Alice's 1st pointer, then Bob's, and so on.
// A repeated pointer ends the chain, matching shortest-path semantics.
inline std::optional<NodeId> pointer_follow(const PointerInstance& pi, std::uint64_t k) {
  pi.validate();
  std::vector<bool> seen_a(pi.p + 1), seen_b(pi.p + 1);
  std::uint64_t at = 1;
  bool alice_side = true;
  seen_a[1] = true;
  for (std::uint64_t i = 0; i < k; ++i) {
    at = alice_side ? pi.alice[at - 1] : pi.bob[at - 1];
    alice_side = !alice_side;
    auto& seen = alice_side ? seen_a : seen_b;
    if (seen[at]) return std::nullopt;
    seen[at] = true;
  }
  return NodeId{static_cast<std::uint32_t>(alice_side ? at : pi.p + at)};
}

namespace detail {

// Iteration i occupies rounds [i(D+1), (i+1)(D+1)). The node at distance i
// floods its overlay successor's ID at the start; whoever is named and has
// no distance yet takes i+1. After k iterations the node at distance k
// floods its own ID so everyone learns the answer.
class DistanceKProgram {
 public:
  struct Input {
    bool is_start = false;
    std::optional<NodeId> successor;
  };
  struct State {
    std::optional<NodeId> successor;
    std::optional<std::uint64_t> dist;
    std::optional<NodeId> answer;
    std::vector<Word> heard;  // words already forwarded in this iteration
  };
  struct Output {
    std::optional<std::uint64_t> dist;
    std::optional<NodeId> answer;
  };

  DistanceKProgram(std::uint64_t k, std::uint64_t diameter) : k_(k), period_(diameter + 1) {}

  std::uint64_t total_rounds() const { return k_ == 0 ? 1 : (k_ + 1) * period_; }

  State init(NodeContext& ctx, const Input& in) const {
    State s;
    s.successor = in.successor;
    if (in.is_start) {
      s.dist = 0;
      if (k_ == 0) s.answer = ctx.id();
    }
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t round, std::span<const Envelope> inbox, Outbox& out) const {
    if (k_ == 0) return Status::halted;
    const std::uint64_t iteration = round / period_;
    const bool final_flood = iteration == k_;
    if (round % period_ == 0) {
      s.heard.clear();
      if (s.dist == iteration) {
        std::optional<Word> word;
        if (final_flood) {
          word = ctx.id().value;
          s.answer = ctx.id();
        } else if (s.successor) {
          word = s.successor->value;
        }
        if (word) {
          s.heard.push_back(*word);
          for (Vertex nb : ctx.neighbors()) out.send(nb, {*word});
        }
      }
    }
    for (const auto& env : inbox) {
      const Word word = env.payload.at(0);
      if (std::find(s.heard.begin(), s.heard.end(), word) != s.heard.end()) continue;
      s.heard.push_back(word);
      const NodeId named{static_cast<std::uint32_t>(word)};
      if (final_flood) {
        s.answer = named;
      } else if (named == ctx.id() && !s.dist) {
        s.dist = iteration + 1;
      }
      for (Vertex nb : ctx.neighbors()) {
        if (std::any_of(inbox.begin(), inbox.end(), [&](const Envelope& e) { return e.from == nb; })) continue;
        out.send(nb, {word});
      }
    }
    return round + 1 >= total_rounds() ? Status::halted : Status::running;
  }

  Output output(const NodeContext&, const State& s) const { return {s.dist, s.answer}; }

 private:
  std::uint64_t k_;
  std::uint64_t period_;
};

}  // namespace detail

struct DistanceKResult {
  std::optional<NodeId> answer;
  std::vector<std::optional<std::uint64_t>> dist;  // by vertex
  RunTrace trace;
};

// `diameter` is global knowledge; it is computed centrally when omitted.
inline DistanceKResult run_distance_k(const Graph& g, const DirectedOverlay& overlay, NodeId u, std::uint64_t k,
                                      const BandwidthConfig& cfg, std::optional<std::uint64_t> diameter_hint = {},
                                      std::uint64_t seed = 0, const RunOptions& options = {}) {
  if (cfg.mode != CongestionMode::strict) throw ConfigError("the distance flood runs in strict mode");
  if (overlay.size() != g.size()) throw ConfigError("overlay and graph sizes differ");
  if (overlay.max_out_degree() > 1) throw ConfigError("overlay out-degree must be at most 1");
  const Vertex start = g.index_of(u);
  const std::uint64_t d = diameter_hint ? *diameter_hint : diameter(g);

  std::vector<detail::DistanceKProgram::Input> inputs(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    inputs[v].is_start = v == start;
    if (!overlay.out(v).empty()) inputs[v].successor = overlay.out(v).front();
  }
  detail::DistanceKProgram program(k, d);
  auto res = run(g, program, inputs, cfg, seed, program.total_rounds() + 1, options);

  DistanceKResult out;
  out.answer = res.outputs[start].answer;
  for (const auto& o : res.outputs) {
    // with k = 0 only u itself knows the answer
    if (k > 0 && o.answer != out.answer) throw EngineError("nodes disagree on the distance-k answer");
    out.dist.push_back(o.dist);
  }
  out.trace = std::move(res.trace);
  return out;
}

inline std::uint64_t bridge_bits(const ReductionInstance& inst, const RunTrace& trace) {
  if (trace.directions.empty()) return 0;
  return measure_bits(trace, inst.l, inst.r);
}

// Eight nodes; the arcs out of
// node 1 reach 7 in two steps.
struct EightNodeExample {
  Graph graph;
  DirectedOverlay overlay;
};

inline EightNodeExample eight_node_example() {
  auto n = [](std::uint32_t v) { return NodeId{v}; };
  std::vector<NodeId> ids;
  for (std::uint32_t v = 1; v <= 8; ++v) ids.push_back(n(v));
  std::vector<EdgeSpec> edges{{n(1), n(2), 1}, {n(1), n(5), 1}, {n(2), n(3), 1}, {n(2), n(6), 1}, {n(3), n(4), 1},
                              {n(4), n(8), 1}, {n(5), n(6), 1}, {n(6), n(7), 1}, {n(7), n(8), 1}};
  EightNodeExample f;
  f.graph = Graph(ids, edges, false);
  std::vector<std::pair<NodeId, NodeId>> arcs{{n(1), n(4)}, {n(4), n(7)}, {n(7), n(2)}, {n(2), n(8)},
                                              {n(8), n(5)}, {n(3), n(1)}, {n(6), n(3)}};
  f.overlay = DirectedOverlay(f.graph, arcs);
  return f;
}

struct InsensitivityRow {
  std::uint64_t x = 0;
  std::uint64_t capacity_bits = 0;
  std::uint64_t rounds_used = 0;
  std::uint64_t bridge_bits = 0;
  bool correct = false;
  bool below_threshold = false;  // X*w <= p/k^3, where faster protocols need more bits than allowed
};

struct InsensitivitySweep {
  ReductionInstance instance;
  std::uint32_t word_bits = 0;
  std::vector<InsensitivityRow> rows;
};

inline InsensitivitySweep insensitivity_sweep(std::uint64_t p, std::uint64_t k, std::span<const std::uint64_t> xs,
                                              std::uint64_t seed) {
  if (xs.empty() || !std::is_sorted(xs.begin(), xs.end()) || xs.front() == 0)
    throw std::invalid_argument("X list must be ascending and positive");
  InsensitivitySweep out;
  out.instance = build_reduction(PointerInstance::random(p, seed));
  const auto& g = out.instance.graph;
  const auto want = pointer_follow(out.instance.pointers, k);
  for (auto x : xs) {
    auto cfg = BandwidthConfig::with_words(g, x);
    out.word_bits = cfg.word_bits;
    auto res = run_distance_k(g, out.instance.overlay, out.instance.start(), k, cfg, 3, seed);
    InsensitivityRow row;
    row.x = x;
    row.capacity_bits = cfg.capacity_bits;
    row.rounds_used = res.trace.rounds_used;
    row.bridge_bits = bridge_bits(out.instance, res.trace);
    row.correct = res.answer == want;
    row.below_threshold = k > 0 && static_cast<double>(cfg.capacity_bits) <= static_cast<double>(p) / static_cast<double>(k * k * k);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace congest
