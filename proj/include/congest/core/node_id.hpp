#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>

namespace congest {

// Node identifier as seen by the distributed algorithms. Distinct within a
// graph, drawn from a range polynomial in n.
struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
  friend std::ostream& operator<<(std::ostream& os, NodeId id) { return os << id.value; }
};

// Dense index of a node inside a Graph (0..n-1). Indices follow ascending ID
// order, so comparing indices is the same as comparing IDs.
using Vertex = std::uint32_t;

// Path length (hops, or summed weights for weighted hop-limited queries);
// std::nullopt is the unreachable marker.
using Distance = std::optional<std::uint64_t>;

// Bits needed to write any ID in [0, max_id]: ceil(log2(max_id + 1)), at least 1.
constexpr std::uint32_t bits_for(std::uint64_t max_id) noexcept {
  std::uint32_t bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) <= max_id) ++bits;
  return bits == 0 ? 1 : bits;
}

}  // namespace congest

template <>
struct std::hash<congest::NodeId> {
  std::size_t operator()(congest::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
