#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "congest/core/graph.hpp"

namespace congest {

// Text formats (decimal ASCII, LF line endings):
//   graph:   "n m [weighted]" then m lines "u v [w]", u < v, sorted.
//   overlay: "n a" then a lines "u v" meaning arc u -> v, sorted.
// Node IDs are the endpoints named in the edge list; a one-node graph with
// no edges gets ID 0.

inline void write_graph(std::ostream& os, const Graph& g) {
  os << g.size() << ' ' << g.edge_count();
  if (g.weighted()) os << " weighted";
  os << '\n';
  for (const auto& e : g.edges()) {
    os << g.id(e.u).value << ' ' << g.id(e.v).value;
    if (g.weighted()) os << ' ' << e.weight;
    os << '\n';
  }
}

inline std::string graph_to_string(const Graph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

inline Graph read_graph(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw GraphError("empty graph file");
  std::istringstream hs(header);
  std::size_t n = 0, m = 0;
  std::string flag;
  if (!(hs >> n >> m)) throw GraphError("malformed graph header: '" + header + "'");
  hs >> flag;
  const bool weighted = flag == "weighted";
  if (!flag.empty() && !weighted) throw GraphError("unknown graph header flag '" + flag + "'");

  std::vector<EdgeSpec> edges;
  edges.reserve(m);
  std::set<std::uint32_t> seen;
  std::string line;
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::getline(is, line)) throw GraphError("graph file ends after " + std::to_string(i) + " edges");
    std::istringstream ls(line);
    std::uint64_t u = 0, v = 0, w = 1;
    if (!(ls >> u >> v)) throw GraphError("malformed edge line: '" + line + "'");
    if (weighted && !(ls >> w)) throw GraphError("missing weight on line: '" + line + "'");
    if (u > UINT32_MAX || v > UINT32_MAX) throw GraphError("node id out of range");
    edges.push_back({NodeId{static_cast<std::uint32_t>(u)}, NodeId{static_cast<std::uint32_t>(v)}, w});
    seen.insert(static_cast<std::uint32_t>(u));
    seen.insert(static_cast<std::uint32_t>(v));
  }
  if (n == 1 && m == 0) seen.insert(0);
  if (seen.size() != n)
    throw GraphError("header says " + std::to_string(n) + " nodes but edges name " + std::to_string(seen.size()));
  std::vector<NodeId> ids;
  ids.reserve(n);
  for (auto v : seen) ids.emplace_back(v);
  return Graph(std::move(ids), edges, weighted);
}

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file " + path);
  return read_graph(in);
}

inline void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphError("cannot write graph file " + path);
  write_graph(out, g);
}

inline void write_overlay(std::ostream& os, const Graph& base, const DirectedOverlay& overlay) {
  os << base.size() << ' ' << overlay.arc_count() << '\n';
  for (Vertex v = 0; v < overlay.size(); ++v)
    for (NodeId to : overlay.out(v)) os << base.id(v).value << ' ' << to.value << '\n';
}

inline DirectedOverlay read_overlay(std::istream& is, const Graph& base) {
  std::size_t n = 0, a = 0;
  std::string line;
  if (!std::getline(is, line)) throw GraphError("empty overlay file");
  std::istringstream hs(line);
  if (!(hs >> n >> a)) throw GraphError("malformed overlay header: '" + line + "'");
  if (n != base.size()) throw GraphError("overlay node count does not match the communication graph");
  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(a);
  for (std::size_t i = 0; i < a; ++i) {
    if (!std::getline(is, line)) throw GraphError("overlay file ends after " + std::to_string(i) + " arcs");
    std::istringstream ls(line);
    std::uint32_t u = 0, v = 0;
    if (!(ls >> u >> v)) throw GraphError("malformed arc line: '" + line + "'");
    arcs.emplace_back(NodeId{u}, NodeId{v});
  }
  return DirectedOverlay(base, arcs);
}

}  // namespace congest
