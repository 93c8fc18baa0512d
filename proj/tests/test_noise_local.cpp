#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "graphnoise/noise_local.hpp"
#include "helpers.hpp"

using namespace graphnoise;

namespace {

NoiseSpec local_spec(NoiseOp op, double ratio, std::uint64_t seed) {
  NoiseSpec spec;
  spec.level = NoiseLevel::Local;
  spec.op = op;
  spec.ratio = ratio;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("select_targets ranks by degree then id", "[noise-local]") {
  CHECK(select_targets(testutil::star_graph(4), 0.2) == std::vector<NodeId>{0});
  // T3 degrees (2,2,3,3,2,2); ceil(0.34*6)=3; sort by degree desc, id asc
  CHECK(select_targets(testutil::two_triangles_bridge(), 0.34) == std::vector<NodeId>{2, 3, 0});
  CHECK(select_targets(testutil::two_triangles_bridge(), 1.0) == std::vector<NodeId>{2, 3, 0, 1, 4, 5});
}

TEST_CASE("local delete trims the star center to the threshold", "[noise-local]") {
  const Graph star = testutil::star_graph(4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto [g, report] = local_delete(star, local_spec(NoiseOp::Delete, 0.2, seed));
    g.validate();
    CHECK(g.edge_count() == 1);
    CHECK(g.degree(0) == 1);
    CHECK(report.deleted.size() == 3);
    CHECK(report.threshold == 1);
    CHECK(report.targets == std::vector<NodeId>{0});
    // deletions are a subset of the original edges
    for (const Edge& e : report.deleted) CHECK(star.has_edge(e.u, e.v));
  }
}

TEST_CASE("local delete leaves graphs at the threshold untouched", "[noise-local]") {
  const Graph k3 = testutil::triangle_graph();
  const auto [g, report] = local_delete(k3, local_spec(NoiseOp::Delete, 1.0, 5));
  CHECK(testutil::edge_set(g) == testutil::edge_set(k3));
  CHECK(report.deleted.empty());
}

TEST_CASE("local delete on T3: outcome set matches enumeration", "[noise-local]") {
  // Node 2 drops one of its 3 edges. If it drops the bridge (2,3), node 3 is
  // already at the threshold; otherwise node 3 drops one edge too.
  const Graph t3 = testutil::two_triangles_bridge();
  std::set<std::size_t> deleted_counts;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto [g, report] = local_delete(t3, local_spec(NoiseOp::Delete, 0.34, seed));
    g.validate();
    deleted_counts.insert(report.deleted.size());
    const bool dropped_bridge =
        std::find(report.deleted.begin(), report.deleted.end(), Edge{2, 3}) != report.deleted.end();
    if (dropped_bridge && report.deleted.size() == 1) {
      CHECK(g.degree(3) == 2);
    }
    for (NodeId v : report.targets) CHECK(g.degree(v) <= *report.threshold);
  }
  CHECK(deleted_counts == std::set<std::size_t>{1, 2});
}

TEST_CASE("local flip on the star rolls back impossible replacements", "[noise-local]") {
  const Graph star = testutil::star_graph(4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto [g, report] = local_flip(star, local_spec(NoiseOp::Flip, 0.2, seed));
    CHECK(testutil::edge_set(g) == testutil::edge_set(star));
    CHECK(report.skipped_pairs == 3);
    CHECK(report.deleted.empty());
    CHECK(report.added.empty());
  }
}

TEST_CASE("local flip with zero budgets is a no-op", "[noise-local]") {
  const Graph k3 = testutil::triangle_graph();
  const auto [g, report] = local_flip(k3, local_spec(NoiseOp::Flip, 1.0, 9));
  CHECK(testutil::edge_set(g) == testutil::edge_set(k3));
  CHECK(report.skipped_pairs == 0);
}

TEST_CASE("local flip preserves the edge count and never re-adds originals", "[noise-local]") {
  const Graph t3 = testutil::two_triangles_bridge();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto [g, report] = local_flip(t3, local_spec(NoiseOp::Flip, 0.34, seed));
    g.validate();
    CHECK(g.edge_count() == 7);
    CHECK(report.deleted.size() == report.added.size());
    for (const Edge& e : report.added) {
      CHECK_FALSE(t3.has_edge(e.u, e.v));
      CHECK(g.has_edge(e.u, e.v));
    }
    for (const Edge& e : report.deleted) CHECK(t3.has_edge(e.u, e.v));
  }
}

TEST_CASE("local flip report stays consistent when artificial edges get re-deleted", "[noise-local]") {
  // dense-ish random graphs at full ratio exercise interleaved delete/add
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g0 = testutil::random_graph(12, 0.45, seed + 500);
    const auto [g, report] = local_flip(g0, local_spec(NoiseOp::Flip, 1.0, seed));
    g.validate();
    CHECK(g.edge_count() == g0.edge_count());
    CHECK(report.deleted.size() == report.added.size());
    std::set<Edge> original = testutil::edge_set(g0);
    std::set<Edge> result = testutil::edge_set(g);
    for (const Edge& e : report.added) {
      CHECK(original.count(e) == 0);
      CHECK(result.count(e) == 1);
    }
    for (const Edge& e : report.deleted) {
      CHECK(original.count(e) == 1);
      CHECK(result.count(e) == 0);
    }
    // net delta reconstructs the perturbed graph exactly
    std::set<Edge> reconstructed = original;
    for (const Edge& e : report.deleted) reconstructed.erase(e);
    for (const Edge& e : report.added) reconstructed.insert(e);
    CHECK(reconstructed == result);
  }
}

TEST_CASE("local add on the star has no room", "[noise-local]") {
  const Graph star = testutil::star_graph(4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto [g, report] = local_add(star, local_spec(NoiseOp::Add, 0.2, seed));
    CHECK(testutil::edge_set(g) == testutil::edge_set(star));
    CHECK(report.skipped_pairs == 3);
  }
}

TEST_CASE("local add on T3: outcome set matches enumeration", "[noise-local]") {
  // Targets [2,3,0], budgets 1,1,0. Node 2 must add (2,4) or (2,5); node 3
  // must then add (3,0) or (3,1). Both always succeed, so |edges| = 9.
  const Graph t3 = testutil::two_triangles_bridge();
  std::set<Edge> node2_choices, node3_choices;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto [g, report] = local_add(t3, local_spec(NoiseOp::Add, 0.34, seed));
    g.validate();
    CHECK(g.edge_count() == 9);
    CHECK(report.skipped_pairs == 0);
    REQUIRE(report.added.size() == 2);
    for (const Edge& e : report.added) {
      CHECK_FALSE(t3.has_edge(e.u, e.v));
      if (e.u == 2 || e.v == 2) node2_choices.insert(e);
      if (e.u == 3 || e.v == 3) node3_choices.insert(e);
    }
  }
  CHECK(node2_choices == std::set<Edge>{Edge{2, 4}, Edge{2, 5}});
  CHECK(node3_choices == std::set<Edge>{Edge{0, 3}, Edge{1, 3}});
}

TEST_CASE("local add with a high threshold is a no-op", "[noise-local]") {
  const Graph t3 = testutil::two_triangles_bridge();
  auto spec = local_spec(NoiseOp::Add, 1.0, 3);
  spec.threshold_override = 10;
  const auto [g, report] = local_add(t3, spec);
  CHECK(testutil::edge_set(g) == testutil::edge_set(t3));
  CHECK(report.added.empty());
}

TEST_CASE("local noise monotonicity properties over random graphs", "[noise-local]") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Graph g0 = testutil::random_graph(30, 0.15, seed + 900);
    const std::set<Edge> original = testutil::edge_set(g0);

    const auto [gd, rd] = local_delete(g0, local_spec(NoiseOp::Delete, 0.5, seed));
    const std::set<Edge> deleted_set = testutil::edge_set(gd);
    CHECK(std::includes(original.begin(), original.end(), deleted_set.begin(), deleted_set.end()));
    for (NodeId v : rd.targets) CHECK(gd.degree(v) <= *rd.threshold);

    const auto [ga, ra] = local_add(g0, local_spec(NoiseOp::Add, 0.5, seed));
    const std::set<Edge> added_set = testutil::edge_set(ga);
    CHECK(std::includes(added_set.begin(), added_set.end(), original.begin(), original.end()));

    const auto [gf, rf] = local_flip(g0, local_spec(NoiseOp::Flip, 0.5, seed));
    CHECK(gf.edge_count() == g0.edge_count());
  }
}

TEST_CASE("identical specs give identical perturbations", "[noise-local]") {
  const Graph g0 = testutil::random_graph(40, 0.12, 77);
  const auto a = local_flip(g0, local_spec(NoiseOp::Flip, 0.6, 1234));
  const auto b = local_flip(g0, local_spec(NoiseOp::Flip, 0.6, 1234));
  CHECK(a.first.edges() == b.first.edges());
  const auto c = local_flip(g0, local_spec(NoiseOp::Flip, 0.6, 1235));
  CHECK(a.first.edges() != c.first.edges());  // different seed, different noise
}

TEST_CASE("noise spec validation", "[noise-local]") {
  CHECK_THROWS_AS(local_delete(testutil::triangle_graph(), local_spec(NoiseOp::Delete, 0.0, 1)), InputError);
  CHECK_THROWS_AS(local_delete(testutil::triangle_graph(), local_spec(NoiseOp::Delete, 1.5, 1)), InputError);
  auto spec = local_spec(NoiseOp::Flip, 0.5, 1);
  spec.role_count = 1;
  CHECK_THROWS_AS(spec.validate(), InputError);
}
