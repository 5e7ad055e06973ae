#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "congest/bcc.hpp"
#include "congest/core/oracles.hpp"
#include "congest/core/rng.hpp"
#include "congest/engine/engine.hpp"

namespace congest {

// Skeleton nodes: exactly alpha distinct nodes drawn uniformly, always including s.
inline std::vector<NodeId> sample_skeleton(const Graph& g, NodeId s, std::uint64_t alpha, std::uint64_t seed) {
  if (alpha < 1 || alpha > g.size()) throw std::invalid_argument("alpha must lie in [1, n]");
  const Vertex sv = g.index_of(s);
  std::vector<Vertex> pool;
  pool.reserve(g.size() - 1);
  for (Vertex v = 0; v < g.size(); ++v)
    if (v != sv) pool.push_back(v);
  Rng rng = make_rng(seed, 0x534b454cULL);
  std::vector<NodeId> out{s};
  for (std::uint64_t i = 0; i + 1 < alpha; ++i) {
    const auto j = uniform_int(rng, i, pool.size() - 1);
    std::swap(pool[i], pool[j]);
    out.push_back(g.id(pool[i]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Delta = ceil(k * log2(n)^2 / B).
inline std::uint64_t predicted_delay_interval(std::uint64_t k, std::uint64_t n, std::uint64_t capacity_bits) {
  if (k == 0 || n < 2 || capacity_bits == 0) throw std::invalid_argument("k, B must be positive and n at least 2");
  const double lg = std::log2(static_cast<double>(n));
  if (static_cast<double>(capacity_bits) < lg) throw std::invalid_argument("B below log2(n) is outside the supported regime");
  const double raw = static_cast<double>(k) * lg * lg / static_cast<double>(capacity_bits);
  return static_cast<std::uint64_t>(std::ceil(raw - 1e-9));
}

namespace detail {

// Per node and source, a Pareto set of (distance, hops) pairs. A pair that is
// not dominated is kept and, if it can still be extended, sent to every
// neighbor as one 3-word envelope [source ID, distance, hops].
class HopBoundedProgram {
 public:
  struct Input {
    bool source = false;
  };
  struct Entry {
    std::uint64_t dist;
    std::uint64_t hops;
  };
  struct State {
    bool source = false;
    std::uint64_t delay = 0;
    bool started = false;
    std::map<std::uint32_t, std::vector<Entry>> front;  // by source ID
    std::map<std::uint32_t, std::uint64_t> broadcasts;
  };
  struct Output {
    std::map<std::uint32_t, std::uint64_t> dist;
    std::map<std::uint32_t, std::uint64_t> broadcasts;
    std::optional<std::uint64_t> delay;
  };

  HopBoundedProgram(std::uint64_t hops, std::uint64_t delta) : hops_(hops), delta_(delta) {}

  State init(NodeContext& ctx, const Input& in) const {
    State s;
    s.source = in.source;
    if (in.source) {
      s.delay = uniform_int(ctx.rng(), 0, delta_);
      s.front[ctx.id().value].push_back({0, 0});
    }
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t round, std::span<const Envelope> inbox, Outbox& out) const {
    std::vector<std::pair<std::uint32_t, Entry>> fresh;
    if (s.source && !s.started && round >= s.delay) {
      s.started = true;
      fresh.emplace_back(ctx.id().value, Entry{0, 0});
    }
    for (const auto& env : inbox) {
      const auto i = static_cast<std::uint32_t>(env.payload.at(0));
      const Entry cand{env.payload.at(1) + ctx.weight_to(env.from), env.payload.at(2) + 1};
      if (cand.hops > hops_) continue;
      if (insert(s.front[i], cand) && cand.hops < hops_) fresh.emplace_back(i, cand);
    }
    for (const auto& [i, e] : fresh) {
      // a later arrival this round may already dominate it
      if (!std::any_of(s.front[i].begin(), s.front[i].end(),
                       [&](const Entry& x) { return x.dist == e.dist && x.hops == e.hops; }))
        continue;
      ++s.broadcasts[i];
      for (Vertex nb : ctx.neighbors()) out.send(nb, {Word{i}, e.dist, e.hops});
    }
    if (s.source && !s.started) return Status::running;
    return Status::idle;
  }

  Output output(const NodeContext&, const State& s) const {
    Output o;
    for (const auto& [id, f] : s.front) {
      std::uint64_t best = f.front().dist;
      for (const auto& e : f) best = std::min(best, e.dist);
      o.dist[id] = best;
    }
    o.broadcasts = s.broadcasts;
    if (s.source) o.delay = s.delay;
    return o;
  }

 private:
  static bool insert(std::vector<Entry>& front, Entry cand) {
    for (const auto& e : front)
      if (e.dist <= cand.dist && e.hops <= cand.hops) return false;
    std::erase_if(front, [&](const Entry& e) { return cand.dist <= e.dist && cand.hops <= e.hops; });
    front.push_back(cand);
    return true;
  }

  std::uint64_t hops_;
  std::uint64_t delta_;
};

}  // namespace detail

struct MsspResult {
  std::vector<NodeId> sources;               // ascending
  std::vector<std::vector<Distance>> dist;   // [source index][vertex]
  std::vector<std::uint64_t> delays;         // by source index
  std::uint64_t delta = 0;
  std::uint64_t max_edge_words = 0;          // most words emitted on one direction in one round
  std::uint64_t overflow_words = 0;          // words that had to wait in a queue
  std::uint64_t max_broadcasts = 0;          // most broadcasts by one node for one source
  RunTrace trace;
};

// Bounded-hop multi-source distances. Each source starts its exploration
// after a delay drawn from {0..delta}; links queue what does not fit.
inline MsspResult bounded_hop_mssp(const Graph& g, std::span<const NodeId> sources, std::uint64_t hops,
                                   const BandwidthConfig& cfg, std::uint64_t seed,
                                   std::optional<std::uint64_t> delta_override = std::nullopt,
                                   const RunOptions& options = {}) {
  if (cfg.mode != CongestionMode::queue) throw ConfigError("multi-source exploration runs in queue mode");
  if (hops == 0) throw ConfigError("hop budget must be at least 1");
  if (cfg.capacity_bits < 3ull * cfg.word_bits) throw ConfigError("a distance message takes 3 words");
  MsspResult out;
  out.sources.assign(sources.begin(), sources.end());
  std::sort(out.sources.begin(), out.sources.end());
  if (std::adjacent_find(out.sources.begin(), out.sources.end()) != out.sources.end())
    throw ConfigError("sources must be distinct");
  out.delta = delta_override ? *delta_override
                             : (g.size() < 2 ? 0 : predicted_delay_interval(out.sources.size(), g.size(), cfg.capacity_bits));

  std::vector<detail::HopBoundedProgram::Input> inputs(g.size());
  for (const auto& id : out.sources) inputs[g.index_of(id)].source = true;
  const std::uint64_t budget = out.delta + 64 * (hops + g.size()) * (out.sources.size() + 1) + 16;
  auto res = run(g, detail::HopBoundedProgram(hops, out.delta), inputs, cfg, seed, budget, options);

  out.dist.assign(out.sources.size(), std::vector<Distance>(g.size()));
  out.delays.assign(out.sources.size(), 0);
  for (Vertex v = 0; v < g.size(); ++v) {
    const auto& o = res.outputs[v];
    for (std::size_t i = 0; i < out.sources.size(); ++i)
      if (auto it = o.dist.find(out.sources[i].value); it != o.dist.end()) out.dist[i][v] = it->second;
    for (const auto& [id, count] : o.broadcasts) out.max_broadcasts = std::max(out.max_broadcasts, count);
    if (o.delay) {
      const auto i = std::lower_bound(out.sources.begin(), out.sources.end(), g.id(v)) - out.sources.begin();
      out.delays[static_cast<std::size_t>(i)] = *o.delay;
    }
  }
  out.max_edge_words = res.trace.max_emitted_bits / cfg.word_bits;
  out.overflow_words = res.trace.overflow_bits / cfg.word_bits;
  out.trace = std::move(res.trace);
  return out;
}

}  // namespace congest
