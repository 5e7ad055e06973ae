#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "congest/engine/config.hpp"

namespace congest {

// Direction 0 carries traffic from the lower ID endpoint to the higher one.
struct LinkRecord {
  std::uint64_t round = 0;
  NodeId u;
  NodeId v;
  std::uint8_t direction = 0;
  std::uint64_t bits = 0;
  std::uint64_t backlog_bits = 0;

  friend bool operator==(const LinkRecord&, const LinkRecord&) = default;
};

struct EnvelopeRecord {
  std::uint64_t round = 0;  // round in which the envelope crossed the link
  NodeId src;
  NodeId dst;
  std::vector<Word> payload;
  std::uint64_t size_bits = 0;

  friend bool operator==(const EnvelopeRecord&, const EnvelopeRecord&) = default;
};

struct DirectionTotals {
  std::uint64_t emitted_bits = 0;
  std::uint64_t delivered_bits = 0;
  std::uint64_t backlog_bits = 0;

  friend bool operator==(const DirectionTotals&, const DirectionTotals&) = default;
};

struct RunTrace {
  std::uint32_t word_bits = 1;
  std::uint64_t capacity_bits = 1;

  std::uint64_t rounds_used = 0;
  std::uint64_t total_messages = 0;

  // Largest number of bits any node emitted toward one neighbor in one round,
  // before queueing. Equals the largest delivery in strict mode.
  std::uint64_t max_emitted_bits = 0;
  // Bits that could not leave in the round they were emitted (queue mode).
  std::uint64_t overflow_bits = 0;

  std::vector<LinkRecord> links;
  std::vector<std::uint64_t> halt_round;
  // Network-wide backlog after each simulated round.
  std::vector<std::uint64_t> backlog_history;

  // Canonical edge list (u < v) and per-direction totals at 2*e + direction.
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<DirectionTotals> directions;

  std::vector<EnvelopeRecord> envelopes;  // only when requested

  std::uint64_t last_transmission_round = 0;
  bool any_transmission = false;

  friend bool operator==(const RunTrace&, const RunTrace&) = default;

  // Rounds this run occupies when another phase follows it.
  std::uint64_t span_rounds() const noexcept {
    return any_transmission ? std::max(rounds_used, last_transmission_round + 1) : rounds_used;
  }

  std::uint64_t max_edge_bits() const noexcept {
    std::uint64_t best = 0;
    for (const auto& r : links) best = std::max(best, r.bits);
    return best;
  }

  std::uint64_t max_backlog_bits() const noexcept {
    std::uint64_t best = 0;
    for (auto b : backlog_history) best = std::max(best, b);
    return best;
  }

  std::uint64_t total_bits() const noexcept {
    std::uint64_t sum = 0;
    for (const auto& d : directions) sum += d.delivered_bits;
    return sum;
  }

  std::uint64_t emitted_words(std::size_t direction_index) const {
    return directions.at(direction_index).emitted_bits / word_bits;
  }

  std::optional<std::size_t> edge_index(NodeId a, NodeId b) const {
    if (b < a) std::swap(a, b);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(a, b));
    if (it == edges.end() || *it != std::make_pair(a, b)) return std::nullopt;
    return static_cast<std::size_t>(it - edges.begin());
  }

  // Sequential composition: `later` ran right after this run ended.
  void append(const RunTrace& later) {
    const std::uint64_t offset = span_rounds();
    if (directions.empty()) {
      word_bits = later.word_bits;
      capacity_bits = later.capacity_bits;
      edges = later.edges;
      directions.assign(later.directions.size(), {});
    }
    for (auto r : later.links) {
      r.round += offset;
      links.push_back(r);
    }
    for (auto e : later.envelopes) {
      e.round += offset;
      envelopes.push_back(std::move(e));
    }
    if (halt_round.size() < later.halt_round.size()) halt_round.resize(later.halt_round.size(), 0);
    for (std::size_t i = 0; i < later.halt_round.size(); ++i) halt_round[i] = offset + later.halt_round[i];
    backlog_history.resize(offset, 0);
    backlog_history.insert(backlog_history.end(), later.backlog_history.begin(), later.backlog_history.end());
    for (std::size_t i = 0; i < directions.size() && i < later.directions.size(); ++i) {
      directions[i].emitted_bits += later.directions[i].emitted_bits;
      directions[i].delivered_bits += later.directions[i].delivered_bits;
      directions[i].backlog_bits = later.directions[i].backlog_bits;
    }
    if (later.any_transmission) {
      last_transmission_round = offset + later.last_transmission_round;
      any_transmission = true;
    }
    rounds_used = offset + later.rounds_used;
    total_messages += later.total_messages;
    max_emitted_bits = std::max(max_emitted_bits, later.max_emitted_bits);
    overflow_bits += later.overflow_bits;
  }
};

// Total bits that crossed edge {a, b} in both directions. This is the
// two-party communication meter for cut arguments.
inline std::uint64_t measure_bits(const RunTrace& trace, NodeId a, NodeId b) {
  auto e = trace.edge_index(a, b);
  if (!e) throw TopologyError("edge " + std::to_string(a.value) + "-" + std::to_string(b.value) + " is not in the trace");
  return trace.directions[2 * *e].delivered_bits + trace.directions[2 * *e + 1].delivered_bits;
}

inline void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << "round,u,v,direction,bits,backlog_bits\n";
  for (const auto& r : trace.links)
    os << r.round << ',' << r.u.value << ',' << r.v.value << ',' << int{r.direction} << ',' << r.bits << ','
       << r.backlog_bits << '\n';
}

inline nlohmann::ordered_json trace_summary(const RunTrace& trace) {
  nlohmann::ordered_json j;
  j["rounds_used"] = trace.rounds_used;
  j["total_messages"] = trace.total_messages;
  j["max_edge_bits"] = trace.max_edge_bits();
  j["max_backlog_bits"] = trace.max_backlog_bits();
  return j;
}

inline std::string trace_csv_string(const RunTrace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

}  // namespace congest
