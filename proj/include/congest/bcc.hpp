#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "congest/core/graph.hpp"
#include "congest/engine/primitives.hpp"

namespace congest {

// All-to-all exchange of one word per participating node over a rooted
// spanning tree: (id, value) pairs stream up to the root, and the root streams
// every pair back down as soon as it has it. Pairs are two words; a pair may
// be split across rounds when X is odd, so receivers reassemble per link.

struct BccNodeOutput {
  std::vector<std::pair<NodeId, Word>> pairs;  // ascending ID
};

struct BccResult {
  std::vector<BccNodeOutput> nodes;  // by vertex
  RunTrace trace;
};

namespace detail {

class BccProgram {
 public:
  struct Input {
    std::optional<Vertex> parent;
    std::vector<Vertex> children;
    std::optional<Word> value;  // set on skeleton members
  };
  struct State {
    std::optional<Vertex> parent;
    std::vector<Vertex> children;
    std::vector<std::vector<Word>> partial;  // by child position, then parent slot at the end
    std::deque<Word> up;
    std::deque<Word> down;
    std::vector<std::pair<NodeId, Word>> known;
  };
  using Output = BccNodeOutput;

  BccProgram(std::uint64_t members, bool relay) : members_(members), relay_(relay) {}

  State init(NodeContext& ctx, const Input& in) const {
    State s;
    s.parent = in.parent;
    s.children = in.children;
    std::sort(s.children.begin(), s.children.end());
    s.partial.resize(s.children.size() + 1);
    if (in.value) {
      if (s.parent) {
        s.up.push_back(ctx.id().value);
        s.up.push_back(*in.value);
      } else {
        accept(s, ctx.id(), *in.value);
      }
    }
    return s;
  }

  Status on_round(NodeContext& ctx, State& s, std::uint64_t, std::span<const Envelope> inbox, Outbox& out) const {
    for (const auto& env : inbox) {
      if (s.parent && env.from == *s.parent) {
        auto& buf = s.partial.back();
        for (Word w : env.payload) {
          buf.push_back(w);
          if (buf.size() == 2) {
            accept(s, NodeId{static_cast<std::uint32_t>(buf[0])}, buf[1]);
            buf.clear();
          }
        }
        continue;
      }
      auto it = std::lower_bound(s.children.begin(), s.children.end(), env.from);
      auto& buf = s.partial[static_cast<std::size_t>(it - s.children.begin())];
      for (Word w : env.payload) {
        buf.push_back(w);
        if (buf.size() == 2) {
          if (s.parent) {
            s.up.push_back(buf[0]);
            s.up.push_back(buf[1]);
          } else {
            accept(s, NodeId{static_cast<std::uint32_t>(buf[0])}, buf[1]);
          }
          buf.clear();
        }
      }
    }

    const std::uint64_t x = ctx.words_per_round();
    if (s.parent && !s.up.empty()) out.send(*s.parent, take(s.up, x));
    // without relay the root starts the downcast once it holds every pair
    const bool release = relay_ || s.parent || s.known.size() == members_;
    if (release && !s.down.empty()) {
      auto chunk = take(s.down, x);
      for (Vertex c : s.children) out.send(c, chunk);
    }
    const bool done = s.known.size() == members_ && s.up.empty() && s.down.empty();
    return done ? Status::halted : Status::running;
  }

  Output output(const NodeContext&, const State& s) const {
    Output o{s.known};
    std::sort(o.pairs.begin(), o.pairs.end());
    return o;
  }

 private:
  static void accept(State& s, NodeId id, Word value) {
    s.known.emplace_back(id, value);
    if (!s.children.empty()) {
      s.down.push_back(id.value);
      s.down.push_back(value);
    }
  }

  static std::vector<Word> take(std::deque<Word>& q, std::uint64_t x) {
    std::vector<Word> chunk;
    while (!q.empty() && chunk.size() < x) {
      chunk.push_back(q.front());
      q.pop_front();
    }
    return chunk;
  }

  std::uint64_t members_;
  bool relay_;
};

}  // namespace detail

namespace detail {

inline BccResult share_pairs(const Graph& g, const BfsTree& tree, std::span<const NodeId> members,
                             std::span<const Word> values, const BandwidthConfig& cfg, bool relay, std::uint64_t seed,
                             const RunOptions& options) {
  if (members.size() != values.size()) throw ConfigError("one value per skeleton node is required");
  std::vector<detail::BccProgram::Input> inputs(g.size());
  for (Vertex v = 0; v < g.size(); ++v) inputs[v] = {tree.parent[v], tree.children[v], std::nullopt};
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto& slot = inputs[g.index_of(members[i])].value;
    if (slot) throw ConfigError("skeleton node " + std::to_string(members[i].value) + " listed twice");
    slot = values[i];
  }
  const std::uint64_t x = cfg.words_per_round();
  const std::uint64_t budget = 2 * (tree.height + 1) + 4 * ceil_div(2 * members.size() + 2, x) + 8;
  auto res = run(g, BccProgram(members.size(), relay), inputs, cfg, seed, budget, options);
  BccResult out;
  out.nodes = std::move(res.outputs);
  out.trace = std::move(res.trace);
  return out;
}

}  // namespace detail

// One broadcast-clique round: upcast every (id, value) pair to the root,
// then downcast them all. `members` and `values` are aligned.
inline BccResult emulate_bcc_round(const Graph& g, const BfsTree& tree, std::span<const NodeId> members,
                                   std::span<const Word> values, const BandwidthConfig& cfg, std::uint64_t seed = 0,
                                   const RunOptions& options = {}) {
  return detail::share_pairs(g, tree, members, values, cfg, false, seed, options);
}

// Same delivery, but the root relays each pair downward as soon as it arrives.
inline BccResult gather_and_relay(const Graph& g, const BfsTree& tree, std::span<const NodeId> members,
                                  std::span<const Word> values, const BandwidthConfig& cfg, std::uint64_t seed = 0,
                                  const RunOptions& options = {}) {
  return detail::share_pairs(g, tree, members, values, cfg, true, seed, options);
}

}  // namespace congest
