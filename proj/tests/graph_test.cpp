#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "congest/core/generators.hpp"
#include "congest/core/graph_io.hpp"
#include "congest/core/oracles.hpp"
#include "test_util.hpp"

namespace congest {
namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_pairs(const Graph& g) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const auto& e : g.edges()) out.emplace_back(g.id(e.u).value, g.id(e.v).value);
  return out;
}

TEST(Generate, PathHasConsecutiveEdges) {
  auto g = generate(GraphSpec::path(4), 0);
  EXPECT_EQ(edge_pairs(g), (std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}, {1, 2}, {2, 3}}));
}

TEST(Generate, StarIsCenteredAtZero) {
  auto g = generate(GraphSpec::star(5), 0);
  EXPECT_EQ(g.degree(0), 4u);
  for (Vertex v = 1; v < 5; ++v) EXPECT_EQ(g.neighbors(v).front(), 0u);
  EXPECT_EQ(diameter(g), 2u);
}

TEST(Generate, ErdosRenyiIsDeterministicPerSeed) {
  auto a = generate(GraphSpec::erdos_renyi(64, 0.2), 7);
  auto b = generate(GraphSpec::erdos_renyi(64, 0.2), 7);
  auto c = generate(GraphSpec::erdos_renyi(64, 0.2), 8);
  EXPECT_EQ(graph_to_string(a), graph_to_string(b));
  EXPECT_NE(graph_to_string(a), graph_to_string(c));
  EXPECT_EQ(a.size(), 64u);
}

TEST(Generate, SparseErdosRenyiReportsRetries) {
  try {
    generate(GraphSpec::erdos_renyi(64, 0.001), 1);
    FAIL() << "expected a GeneratorError";
  } catch (const GeneratorError& e) {
    EXPECT_EQ(e.retries(), 64);
    EXPECT_NE(std::string(e.what()).find("64 retries"), std::string::npos);
  }
}

TEST(Generate, RejectsBadParameters) {
  EXPECT_THROW(generate(GraphSpec::erdos_renyi(8, 0.0), 1), std::invalid_argument);
  EXPECT_THROW(generate(GraphSpec::erdos_renyi(8, 1.5), 1), std::invalid_argument);
  EXPECT_THROW(generate(GraphSpec::path(0), 1), std::invalid_argument);
  EXPECT_THROW(generate(GraphSpec::grid(0, 3), 1), std::invalid_argument);
}

TEST(Generate, EveryKindYieldsSimpleConnectedDistinctlyWeightedGraphs) {
  const std::vector<GraphSpec> specs = {GraphSpec::erdos_renyi(40, 0.15), GraphSpec::path(17), GraphSpec::star(23),
                                        GraphSpec::grid(5, 7), GraphSpec::tree_plus_chords(30, 12)};
  for (const auto& spec : specs) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto g = generate(spec, seed, true);
      EXPECT_TRUE(g.connected());
      std::set<std::uint64_t> weights;
      std::set<std::pair<Vertex, Vertex>> pairs;
      const std::uint64_t cap = std::uint64_t{g.size()} * g.size() * g.size();
      for (const auto& e : g.edges()) {
        EXPECT_LT(e.u, e.v);
        EXPECT_TRUE(pairs.emplace(e.u, e.v).second);
        EXPECT_GE(e.weight, 1u);
        EXPECT_LE(e.weight, cap);
        weights.insert(e.weight);
      }
      EXPECT_EQ(weights.size(), g.edge_count()) << to_string(spec.kind);
    }
  }
}

TEST(Graph, RejectsMalformedInput) {
  std::vector<EdgeSpec> loop{{NodeId{0}, NodeId{0}, 1}};
  EXPECT_THROW(Graph::with_dense_ids(1, loop, false), GraphError);
  std::vector<EdgeSpec> parallel{{NodeId{0}, NodeId{1}, 1}, {NodeId{1}, NodeId{0}, 1}};
  EXPECT_THROW(Graph::with_dense_ids(2, parallel, false), GraphError);
  std::vector<EdgeSpec> split{{NodeId{0}, NodeId{1}, 1}};
  EXPECT_THROW(Graph::with_dense_ids(3, split, false), GraphError);
  EXPECT_THROW(Graph({NodeId{1}, NodeId{1}}, split, false), GraphError);
}

TEST(GraphIo, TextFormatRoundTripsAndIsSorted) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto g = generate(GraphSpec::tree_plus_chords(25, 10), seed, seed % 2 == 0);
    const auto text = graph_to_string(g);
    std::istringstream in(text);
    auto back = read_graph(in);
    EXPECT_EQ(graph_to_string(back), text);
  }
  auto g = generate(GraphSpec::path(3), 0, false);
  EXPECT_EQ(graph_to_string(g), "3 2\n0 1\n1 2\n");
}

TEST(GraphIo, ReadsSparseIdsAndRejectsGarbage) {
  std::istringstream in("3 2 weighted\n5 9 4\n9 12 7\n");
  auto g = read_graph(in);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.max_id(), NodeId{12});
  EXPECT_EQ(g.weight(g.index_of(NodeId{9}), g.index_of(NodeId{12})), 7u);

  std::istringstream short_file("3 2\n0 1\n");
  EXPECT_THROW(read_graph(short_file), GraphError);
  std::istringstream bad_header("x y\n");
  EXPECT_THROW(read_graph(bad_header), GraphError);
  std::istringstream wrong_count("4 2\n0 1\n1 2\n");
  EXPECT_THROW(read_graph(wrong_count), GraphError);
}

TEST(GraphIo, OverlayFormat) {
  auto g = generate(GraphSpec::path(3), 0);
  std::istringstream in("3 2\n0 2\n2 1\n");
  auto overlay = read_overlay(in, g);
  EXPECT_EQ(overlay.arc_count(), 2u);
  EXPECT_EQ(overlay.max_out_degree(), 1u);
  std::ostringstream out;
  write_overlay(out, g, overlay);
  EXPECT_EQ(out.str(), "3 2\n0 2\n2 1\n");
  std::istringstream unknown("3 1\n0 7\n");
  EXPECT_THROW(read_overlay(unknown, g), GraphError);
}

TEST(BfsDistances, Path) {
  auto g = generate(GraphSpec::path(4), 0);
  auto d = bfs_distances(g, NodeId{0});
  EXPECT_EQ(d, (std::vector<Distance>{0, 1, 2, 3}));
}

TEST(BfsDistances, StarFromLeaf) {
  auto g = generate(GraphSpec::star(5), 0);
  auto d = bfs_distances(g, NodeId{1});
  EXPECT_EQ(d, (std::vector<Distance>{1, 0, 2, 2, 2}));
}

TEST(BfsDistances, MatchesFloydWarshallOnRandomGraph) {
  auto g = generate(GraphSpec::erdos_renyi(32, 0.3), 3);
  auto fw = testing::floyd_warshall(g);
  EXPECT_EQ(bfs_distances(g, NodeId{0}), fw[0]);
}

TEST(BfsDistances, UnknownSource) {
  auto g = generate(GraphSpec::path(4), 0);
  EXPECT_THROW(bfs_distances(g, NodeId{99}), GraphError);
}

TEST(ApspOracle, SmallCases) {
  auto p3 = apsp_oracle(generate(GraphSpec::path(3), 0));
  EXPECT_EQ(p3.at(0, 2), Distance{2});
  auto grid = apsp_oracle(generate(GraphSpec::grid(4, 4), 0));
  EXPECT_EQ(grid.at(0, 15), Distance{6});
}

TEST(ApspOracle, EqualsRowWiseBfsAndIsAMetric) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto g = generate(GraphSpec::tree_plus_chords(24, 8), seed);
    auto table = apsp_oracle(g);
    auto fw = testing::floyd_warshall(g);
    for (Vertex s = 0; s < g.size(); ++s) {
      EXPECT_EQ(table.at(s, s), Distance{0});
      EXPECT_EQ(std::vector<Distance>(table.row(s).begin(), table.row(s).end()), bfs_distances(g, g.id(s)));
      EXPECT_EQ(std::vector<Distance>(table.row(s).begin(), table.row(s).end()), fw[s]);
      for (Vertex t = 0; t < g.size(); ++t) {
        EXPECT_EQ(table.at(s, t), table.at(t, s));
        for (Vertex m = 0; m < g.size(); ++m) EXPECT_LE(*table.at(s, t), *table.at(s, m) + *table.at(m, t));
      }
    }
  }
}

Graph triangle() {
  std::vector<EdgeSpec> edges{{NodeId{0}, NodeId{1}, 1}, {NodeId{1}, NodeId{2}, 2}, {NodeId{0}, NodeId{2}, 3}};
  return Graph::with_dense_ids(3, edges, true);
}

TEST(MstOracle, TriangleDropsHeaviestEdge) {
  auto tree = mst_oracle(triangle());
  std::set<std::uint64_t> weights;
  for (const auto& e : tree) weights.insert(e.weight);
  EXPECT_EQ(weights, (std::set<std::uint64_t>{1, 2}));
}

TEST(MstOracle, TreeIsItsOwnMst) {
  auto g = generate(GraphSpec::path(5), 11, true);
  EXPECT_EQ(mst_oracle(g).size(), 4u);
}

TEST(MstOracle, MatchesPrimAndBruteForce) {
  auto g = generate(GraphSpec::erdos_renyi(32, 0.3), 5, true);
  auto tree = mst_oracle(g);
  EXPECT_EQ(tree.size(), 31u);
  EXPECT_EQ(total_weight(tree), testing::prim_weight(g));
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto small = generate(GraphSpec::erdos_renyi(8, 0.5), seed, true);
    EXPECT_EQ(total_weight(mst_oracle(small)), testing::brute_force_mst_weight(small));
  }
}

TEST(MstOracle, RejectsDuplicateWeights) {
  std::vector<EdgeSpec> edges{{NodeId{0}, NodeId{1}, 4}, {NodeId{1}, NodeId{2}, 4}};
  auto g = Graph::with_dense_ids(3, edges, true);
  EXPECT_THROW(mst_oracle(g), OracleError);
}

TEST(MstOracle, NeverHeavierThanRandomSpanningTrees) {
  auto g = generate(GraphSpec::erdos_renyi(30, 0.25), 2, true);
  const auto best = total_weight(mst_oracle(g));
  Rng rng = make_rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Edge> order(g.edges().begin(), g.edges().end());
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_int(rng, 0, i - 1)]);
    UnionFind uf(g.size());
    std::uint64_t w = 0;
    for (const auto& e : order)
      if (uf.unite(e.u, e.v)) w += e.weight;
    EXPECT_LE(best, w);
  }
}

TEST(HopLimited, PathBudget) {
  auto g = generate(GraphSpec::path(4), 0);
  std::vector<NodeId> src{NodeId{0}};
  EXPECT_FALSE(hop_limited_distances(g, src, 1)[0][2].has_value());
  EXPECT_EQ(hop_limited_distances(g, src, 3)[0][3], Distance{3});
}

TEST(HopLimited, GridMatchesWalkEnumeration) {
  auto g = generate(GraphSpec::grid(3, 3), 0);
  std::vector<NodeId> src{NodeId{0}};
  EXPECT_EQ(hop_limited_distances(g, src, 2)[0], testing::walk_enumeration(g, 0, 2));
}

TEST(HopLimited, WeightedMatchesWalkEnumerationAndIsMonotone) {
  auto g = generate(GraphSpec::tree_plus_chords(10, 6), 4, true);
  std::vector<NodeId> src{NodeId{0}, NodeId{3}, NodeId{7}};
  std::vector<std::vector<Distance>> prev;
  for (std::uint64_t h = 0; h <= 9; ++h) {
    auto d = hop_limited_distances(g, src, h);
    for (std::size_t i = 0; i < src.size(); ++i) {
      EXPECT_EQ(d[i], testing::walk_enumeration(g, g.index_of(src[i]), h)) << "h=" << h;
      if (!prev.empty())
        for (Vertex v = 0; v < g.size(); ++v)
          if (prev[i][v]) {
            EXPECT_LE(*d[i][v], *prev[i][v]);
          }
    }
    prev = d;
  }
}

}  // namespace
}  // namespace congest
