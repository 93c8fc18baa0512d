#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "graphnoise/graph.hpp"
#include "helpers.hpp"

using namespace graphnoise;

TEST_CASE("from_edge_list builds a path", "[graph]") {
  const auto result = from_edge_list({{0, 1}, {1, 2}, {2, 3}}, 4);
  const Graph& g = result.graph;
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(result.duplicates_collapsed == 0);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(0, 2));
  g.validate();
}

TEST_CASE("from_edge_list collapses duplicates in either order", "[graph]") {
  const auto result = from_edge_list({{0, 1}, {1, 0}}, 2);
  CHECK(result.graph.edge_count() == 1);
  CHECK(result.duplicates_collapsed == 1);
}

TEST_CASE("from_edge_list rejects self-loops and bad ids", "[graph]") {
  CHECK_THROWS_AS(from_edge_list({{0, 0}}, 1), InputError);
  CHECK_THROWS_AS(from_edge_list({{0, 5}}, 3), InputError);
  CHECK_THROWS_AS(from_edge_list({{-1, 0}}, 3), InputError);
}

TEST_CASE("edges come out canonical and sorted", "[graph]") {
  const Graph g = testutil::build({{2, 1}, {0, 2}, {1, 0}}, 3);
  const auto edges = g.edges();
  REQUIRE(edges.size() == 3);
  CHECK(edges[0] == Edge{0, 1});
  CHECK(edges[1] == Edge{0, 2});
  CHECK(edges[2] == Edge{1, 2});
}

TEST_CASE("degree_mode on canonical graphs", "[graph]") {
  CHECK(degree_mode(testutil::star_graph(4)) == 1);
  // P4 degrees 1,2,2,1: tie between 1 and 2 goes to the smaller value
  CHECK(degree_mode(testutil::path_graph(4)) == 1);
  CHECK(degree_mode(testutil::triangle_graph()) == 2);
  CHECK_THROWS_AS(degree_mode(Graph{}), InputError);
}

TEST_CASE("degree_mode agrees with brute-force counting on random graphs", "[graph]") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto n = static_cast<NodeId>(5 + (seed * 7) % 196);
    const Graph g = testutil::random_graph(n, 0.05 + 0.3 * ((seed % 3) / 2.0), seed);
    CHECK(degree_mode(g) == testutil::brute_force_degree_mode(g));
  }
}

TEST_CASE("degree_stats reports per-node degrees", "[graph]") {
  const Graph g = testutil::two_triangles_bridge();
  const auto stats = degree_stats(g);
  REQUIRE(stats.degrees.size() == 6);
  CHECK(stats.degrees[0] == 2);
  CHECK(stats.degrees[2] == 3);
  CHECK(stats.mode == 2);
}

TEST_CASE("GraphEditor round-trips and keeps invariants", "[graph]") {
  const Graph g = testutil::two_triangles_bridge();
  GraphEditor editor(g);
  CHECK(editor.remove_edge(2, 3));
  CHECK_FALSE(editor.remove_edge(2, 3));
  CHECK(editor.add_edge(0, 3));
  CHECK_FALSE(editor.add_edge(0, 3));
  CHECK_THROWS_AS(editor.add_edge(1, 1), InputError);
  const Graph out = editor.build();
  out.validate();
  CHECK(out.edge_count() == g.edge_count());
  CHECK(out.has_edge(0, 3));
  CHECK_FALSE(out.has_edge(2, 3));
  // the original is untouched
  CHECK(g.has_edge(2, 3));
  CHECK_FALSE(g.has_edge(0, 3));
}

TEST_CASE("sample_replacement_endpoint exhausted cases", "[graph]") {
  Rng rng(7);
  const Graph star = testutil::star_graph(4);
  CHECK_FALSE(sample_replacement_endpoint(star, star, 0, rng).has_value());
  const Graph k3 = testutil::triangle_graph();
  for (NodeId v = 0; v < 3; ++v) CHECK_FALSE(sample_replacement_endpoint(k3, k3, v, rng).has_value());
}

TEST_CASE("sample_replacement_endpoint draws uniformly over the candidates", "[graph]") {
  const Graph p4 = testutil::path_graph(4);
  Rng rng(42);
  std::map<NodeId, int> counts;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const auto pick = sample_replacement_endpoint(p4, p4, 0, rng);
    REQUIRE(pick.has_value());
    ++counts[*pick];
  }
  // candidates for node 0 of P4 are exactly {2, 3}
  REQUIRE(counts.size() == 2);
  REQUIRE(counts.count(2) == 1);
  REQUIRE(counts.count(3) == 1);
  // ~Binomial(10^4, 1/2): 6 sigma is 300
  CHECK(std::abs(counts[2] - kDraws / 2) < 300);
}

TEST_CASE("sample_replacement_endpoint avoids both graphs' edges", "[graph]") {
  const Graph original = testutil::random_graph(40, 0.2, 11);
  GraphEditor editor(original);
  editor.remove_edge(original.edges().front().u, original.edges().front().v);
  editor.add_edge(original.edges().front().u == 0 ? 1 : 0, 39);
  Rng rng(3);
  for (NodeId v = 0; v < 40; v += 5) {
    for (int i = 0; i < 50; ++i) {
      const auto pick = sample_replacement_endpoint(editor, original, v, rng);
      if (!pick) break;
      CHECK(*pick != v);
      CHECK_FALSE(editor.has_edge(*pick, v));
      CHECK_FALSE(original.has_edge(*pick, v));
    }
  }
}

TEST_CASE("validate catches corrupted structures", "[graph]") {
  const Graph g = testutil::path_graph(3);
  g.validate();
  CHECK(g.neighbors(1).size() == 2);
}
