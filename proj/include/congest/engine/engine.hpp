#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "congest/core/graph.hpp"
#include "congest/core/rng.hpp"
#include "congest/engine/config.hpp"
#include "congest/engine/trace.hpp"

namespace congest {

// What a node reports at the end of its round step.
enum class Status {
  running,  // call me again next round
  idle,     // sleep until a message arrives
  halted,   // done for good; later arrivals are dropped
};

class TimeoutError : public EngineError {
 public:
  TimeoutError(std::uint64_t max_rounds, RunTrace partial)
      : EngineError("run did not terminate within " + std::to_string(max_rounds) + " rounds"),
        partial(std::move(partial)) {}
  RunTrace partial;
};

// Local view handed to a node program. Only the node's own ID, its incident
// edges and the public parameters (n, bandwidth) are meant to be read.
class NodeContext {
 public:
  NodeContext(const Graph& g, Vertex self, const BandwidthConfig& cfg, std::uint64_t seed)
      : graph_(&g), self_(self), cfg_(&cfg), rng_(make_rng(seed, g.id(self).value)) {}

  Vertex self() const noexcept { return self_; }
  NodeId id() const { return graph_->id(self_); }
  std::size_t network_size() const noexcept { return graph_->size(); }
  std::span<const Vertex> neighbors() const { return graph_->neighbors(self_); }
  NodeId id_of(Vertex neighbor) const { return graph_->id(neighbor); }
  std::uint64_t weight_to(Vertex neighbor) const { return graph_->weight(self_, neighbor); }
  bool weighted() const noexcept { return graph_->weighted(); }
  const BandwidthConfig& bandwidth() const noexcept { return *cfg_; }
  std::uint64_t words_per_round() const noexcept { return cfg_->words_per_round(); }
  Rng& rng() noexcept { return rng_; }

  // Neighbor index by ID; used when a payload names a neighbor.
  std::optional<Vertex> neighbor_by_id(NodeId id) const {
    auto v = graph_->find(id);
    if (!v || !graph_->adjacent(self_, *v)) return std::nullopt;
    return v;
  }

 private:
  const Graph* graph_;
  Vertex self_;
  const BandwidthConfig* cfg_;
  Rng rng_;
};

class Outbox {
 public:
  Outbox(NodeId self_id, Vertex self, std::uint32_t word_bits) : self_id_(self_id), self_(self), word_bits_(word_bits) {}

  // Whole-word message; its size is payload.size() * w bits.
  void send(Vertex to, std::vector<Word> payload) {
    const std::uint64_t bits = payload.size() * std::uint64_t{word_bits_};
    items_.push_back(Envelope{self_id_, NodeId{}, self_, to, std::move(payload), bits});
  }

  void send(Vertex to, std::initializer_list<Word> payload) { send(to, std::vector<Word>(payload)); }

  void send_sized(Vertex to, std::vector<Word> payload, std::uint64_t size_bits) {
    items_.push_back(Envelope{self_id_, NodeId{}, self_, to, std::move(payload), size_bits});
  }

  std::vector<Envelope>& items() noexcept { return items_; }
  bool empty() const noexcept { return items_.empty(); }
  void clear() noexcept { items_.clear(); }

 private:
  NodeId self_id_;
  Vertex self_;
  std::uint32_t word_bits_;
  std::vector<Envelope> items_;
};

template <class P>
concept NodeProgram = requires(const P& program, NodeContext& ctx, typename P::State& state,
                               const typename P::Input& input, std::uint64_t round,
                               std::span<const Envelope> inbox, Outbox& out) {
  typename P::Output;
  { program.init(ctx, input) } -> std::same_as<typename P::State>;
  { program.on_round(ctx, state, round, inbox, out) } -> std::same_as<Status>;
  { program.output(ctx, state) } -> std::convertible_to<typename P::Output>;
};

struct RunOptions {
  bool record_links = true;
  bool record_envelopes = false;
};

template <class Output>
struct RunResult {
  std::vector<Output> outputs;  // indexed by vertex
  RunTrace trace;
};

// Synchronous round loop. In round r every live node reads the envelopes
// delivered at the end of round r-1, updates its state and emits an outbox.
// Outboxes cross their links during round r and land in the round r+1 inbox,
// ordered by sender ID, then by emission order.
//
// Nodes are evaluated one after another; each step reads only its own state
// and inbox, so any evaluation order gives the same result.
template <NodeProgram P>
RunResult<typename P::Output> run(const Graph& g, const P& program, std::span<const typename P::Input> inputs,
                                  const BandwidthConfig& cfg, std::uint64_t seed, std::uint64_t max_rounds,
                                  const RunOptions& options = {}) {
  cfg.validate();
  if (inputs.size() != g.size()) throw ConfigError("one input per node is required");
  if (max_rounds == 0) throw ConfigError("max_rounds must be positive");

  const std::size_t n = g.size();
  const std::uint64_t capacity = cfg.capacity_bits;
  const bool queued = cfg.mode == CongestionMode::queue;

  RunTrace trace;
  trace.word_bits = cfg.word_bits;
  trace.capacity_bits = capacity;
  trace.halt_round.assign(n, 0);
  trace.edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) trace.edges.emplace_back(g.id(e.u), g.id(e.v));
  trace.directions.assign(2 * g.edge_count(), {});

  std::vector<NodeContext> contexts;
  contexts.reserve(n);
  std::vector<typename P::State> states;
  states.reserve(n);
  for (Vertex v = 0; v < n; ++v) {
    contexts.emplace_back(g, v, cfg, seed);
    states.push_back(program.init(contexts[v], inputs[v]));
  }

  std::vector<Status> status(n, Status::running);
  std::vector<std::vector<Envelope>> inbox(n), next_inbox(n);
  std::vector<std::deque<Envelope>> fifo(queued ? 2 * g.edge_count() : 0);
  std::vector<std::size_t> nonempty_fifos;
  std::uint64_t total_backlog = 0;

  // Scratch for one round: emitted bits per touched direction.
  std::vector<std::uint64_t> emitted(2 * g.edge_count(), 0);
  std::vector<std::uint64_t> sent(2 * g.edge_count(), 0);
  std::vector<std::size_t> touched;
  std::vector<char> touched_flag(2 * g.edge_count(), 0);
  auto touch = [&](std::size_t dir) {
    if (!touched_flag[dir]) {
      touched_flag[dir] = 1;
      touched.push_back(dir);
    }
  };

  auto direction_of = [&](const Envelope& env) -> std::size_t {
    auto e = g.edge_index(env.from, env.to);
    if (!e)
      throw TopologyError("node " + std::to_string(g.id(env.from).value) + " sent to non-neighbor " +
                          std::to_string(g.id(env.to).value));
    return 2 * std::size_t{*e} + (env.from < env.to ? 0 : 1);
  };

  auto transmit = [&](std::uint64_t round, std::size_t dir, Envelope&& env) {
    touch(dir);
    sent[dir] += env.size_bits;
    trace.directions[dir].delivered_bits += env.size_bits;
    ++trace.total_messages;
    trace.any_transmission = true;
    trace.last_transmission_round = round;
    if (options.record_envelopes)
      trace.envelopes.push_back(EnvelopeRecord{round, env.src, env.dst, env.payload, env.size_bits});
    if (status[env.to] != Status::halted) next_inbox[env.to].push_back(std::move(env));
  };

  std::uint64_t round = 0;
  for (;; ++round) {
    bool all_halted = true;
    for (Vertex v = 0; v < n; ++v) {
      if (status[v] == Status::halted) continue;
      if (status[v] == Status::idle && inbox[v].empty()) continue;
      Outbox out(g.id(v), v, cfg.word_bits);
      status[v] = program.on_round(contexts[v], states[v], round, std::span<const Envelope>(inbox[v]), out);
      if (status[v] != Status::running) trace.halt_round[v] = round;
      for (auto& env : out.items()) {
        const std::size_t dir = direction_of(env);
        env.dst = g.id(env.to);
        if (env.size_bits == 0 || env.size_bits < env.payload.size() * std::uint64_t{cfg.word_bits})
          throw EngineError("envelope size below its payload encoding");
        if (env.size_bits > capacity && queued)
          throw ConfigError("envelope of " + std::to_string(env.size_bits) + " bits can never fit B=" +
                            std::to_string(capacity));
        touch(dir);
        emitted[dir] += env.size_bits;
        trace.directions[dir].emitted_bits += env.size_bits;
        if (!queued) {
          if (emitted[dir] > capacity) throw CongestionViolation(round, env.src, env.dst, emitted[dir], capacity);
          transmit(round, dir, std::move(env));
        } else {
          if (fifo[dir].empty()) nonempty_fifos.push_back(dir);
          total_backlog += env.size_bits;
          fifo[dir].push_back(std::move(env));
        }
      }
      inbox[v].clear();
    }
    for (Vertex v = 0; v < n; ++v)
      if (status[v] == Status::running) all_halted = false;

    if (queued) {
      std::sort(nonempty_fifos.begin(), nonempty_fifos.end());
      std::vector<std::size_t> still;
      for (std::size_t dir : nonempty_fifos) {
        touch(dir);
        auto& q = fifo[dir];
        std::uint64_t used = 0;
        while (!q.empty() && used + q.front().size_bits <= capacity) {
          used += q.front().size_bits;
          total_backlog -= q.front().size_bits;
          Envelope env = std::move(q.front());
          q.pop_front();
          transmit(round, dir, std::move(env));
        }
        std::uint64_t left = 0;
        for (const auto& env : q) left += env.size_bits;
        trace.directions[dir].backlog_bits = left;
        trace.overflow_bits += std::min(left, emitted[dir]);
        if (!q.empty()) still.push_back(dir);
      }
      nonempty_fifos = std::move(still);
    }

    std::sort(touched.begin(), touched.end());
    for (std::size_t dir : touched) {
      trace.max_emitted_bits = std::max(trace.max_emitted_bits, emitted[dir]);
      if (options.record_links) {
        const auto& [a, b] = trace.edges[dir / 2];
        trace.links.push_back(LinkRecord{round, a, b, static_cast<std::uint8_t>(dir % 2), sent[dir],
                                         queued ? trace.directions[dir].backlog_bits : 0});
      }
      emitted[dir] = 0;
      sent[dir] = 0;
      touched_flag[dir] = 0;
    }
    touched.clear();
    trace.backlog_history.push_back(total_backlog);

    bool pending_delivery = false;
    for (Vertex v = 0; v < n; ++v) {
      auto& box = next_inbox[v];
      if (box.empty()) continue;
      std::stable_sort(box.begin(), box.end(), [](const Envelope& a, const Envelope& b) { return a.from < b.from; });
      if (status[v] != Status::halted) pending_delivery = true;
    }
    std::swap(inbox, next_inbox);
    for (auto& box : next_inbox) box.clear();

    const bool quiet = all_halted && !pending_delivery && total_backlog == 0;
    if (quiet) break;
    if (round + 1 >= max_rounds) {
      trace.rounds_used = *std::max_element(trace.halt_round.begin(), trace.halt_round.end());
      throw TimeoutError(max_rounds, std::move(trace));
    }
  }

  trace.rounds_used = *std::max_element(trace.halt_round.begin(), trace.halt_round.end());
  RunResult<typename P::Output> result;
  result.outputs.reserve(n);
  for (Vertex v = 0; v < n; ++v) result.outputs.push_back(program.output(contexts[v], states[v]));
  result.trace = std::move(trace);
  return result;
}

template <NodeProgram P>
RunResult<typename P::Output> run(const Graph& g, const P& program, const std::vector<typename P::Input>& inputs,
                                  const BandwidthConfig& cfg, std::uint64_t seed, std::uint64_t max_rounds,
                                  const RunOptions& options = {}) {
  return run(g, program, std::span<const typename P::Input>(inputs), cfg, seed, max_rounds, options);
}

}  // namespace congest
