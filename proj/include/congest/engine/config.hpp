#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "congest/core/graph.hpp"

namespace congest {

using Word = std::uint64_t;

enum class CongestionMode {
  strict,  // an outbox above capacity on any direction aborts the run
  queue,   // excess envelopes wait in a per-direction FIFO
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Per-edge, per-direction, per-round capacity. A "word" is the unit message
// of w bits; X = floor(B / w) words fit on one direction in one round.
struct BandwidthConfig {
  std::uint32_t word_bits = 1;
  std::uint64_t capacity_bits = 1;
  CongestionMode mode = CongestionMode::strict;

  std::uint64_t words_per_round() const noexcept { return capacity_bits / word_bits; }

  void validate() const {
    if (word_bits == 0) throw ConfigError("word size must be positive");
    if (capacity_bits < word_bits)
      throw ConfigError("capacity B=" + std::to_string(capacity_bits) + " is below one word (w=" +
                        std::to_string(word_bits) + ")");
  }

  // w = ceil(log2(maxId + 1)) for the graph's ID range.
  static BandwidthConfig for_graph(const Graph& g, std::uint64_t capacity_bits,
                                   CongestionMode mode = CongestionMode::strict) {
    BandwidthConfig cfg{bits_for(g.max_id().value), capacity_bits, mode};
    cfg.validate();
    return cfg;
  }

  // Capacity of exactly `words` words.
  static BandwidthConfig with_words(const Graph& g, std::uint64_t words,
                                    CongestionMode mode = CongestionMode::strict) {
    const std::uint32_t w = bits_for(g.max_id().value);
    BandwidthConfig cfg{w, words * w, mode};
    cfg.validate();
    return cfg;
  }
};

// A point-to-point message. `from`/`to` are dense indices used for routing;
// `src`/`dst` are the IDs visible to the algorithm.
struct Envelope {
  NodeId src;
  NodeId dst;
  Vertex from = 0;
  Vertex to = 0;
  std::vector<Word> payload;
  std::uint64_t size_bits = 0;
};

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CongestionViolation : public EngineError {
 public:
  CongestionViolation(std::uint64_t round, NodeId from, NodeId to, std::uint64_t bits, std::uint64_t capacity)
      : EngineError("congestion violation in round " + std::to_string(round) + " on " +
                    std::to_string(from.value) + "->" + std::to_string(to.value) + ": " + std::to_string(bits) +
                    " bits > B=" + std::to_string(capacity)),
        round(round),
        from(from),
        to(to),
        bits(bits) {}

  std::uint64_t round;
  NodeId from;
  NodeId to;
  std::uint64_t bits;
};

class TopologyError : public EngineError {
 public:
  using EngineError::EngineError;
};

}  // namespace congest
