#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "graphnoise/roles.hpp"
#include "helpers.hpp"

using namespace graphnoise;

namespace {

/// Raw (unscaled, unpruned) base + recursive columns, recomputed naively as
/// an oracle for the hand-checked examples.
std::vector<double> column_of(const Graph& g, const char* kind) {
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<double> out(n, 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    std::set<NodeId> ego(g.neighbors(v).begin(), g.neighbors(v).end());
    ego.insert(v);
    double internal = 0.0, boundary = 0.0;
    for (NodeId m : ego) {
      for (NodeId u : g.neighbors(m)) {
        if (ego.count(u)) {
          internal += 0.5;
        } else {
          boundary += 1.0;
        }
      }
    }
    if (std::string_view(kind) == "degree") out[static_cast<std::size_t>(v)] = g.degree(v);
    if (std::string_view(kind) == "internal") out[static_cast<std::size_t>(v)] = internal;
    if (std::string_view(kind) == "boundary") out[static_cast<std::size_t>(v)] = boundary;
  }
  return out;
}

}  // namespace

TEST_CASE("star base features match hand counts", "[roles]") {
  const Graph star = testutil::star_graph(4);
  CHECK(column_of(star, "degree") == std::vector<double>{4, 1, 1, 1, 1});
  // egonet of the center covers the whole star (4 internal edges); a leaf's
  // egonet is itself plus the center (1 internal edge, 3 boundary edges)
  CHECK(column_of(star, "internal") == std::vector<double>{4, 1, 1, 1, 1});
  CHECK(column_of(star, "boundary") == std::vector<double>{0, 3, 3, 3, 3});
}

TEST_CASE("refex depth-1 neighbor means match hand computation", "[roles]") {
  // star: center's neighbor-mean degree is 1, each leaf's is 4. After
  // min-max scaling the retained matrix separates center from leaves.
  const Graph star = testutil::star_graph(4);
  const Eigen::MatrixXd features = refex_features(star, 1);
  REQUIRE(features.rows() == 5);
  REQUIRE(features.cols() >= 1);
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    CHECK(features.col(c).minCoeff() >= 0.0);
    CHECK(features.col(c).maxCoeff() <= 1.0 + 1e-12);
  }
  // all leaves share identical rows, the center differs
  for (int leaf = 2; leaf <= 4; ++leaf) {
    CHECK((features.row(leaf) - features.row(1)).norm() == Catch::Approx(0.0).margin(1e-12));
  }
  CHECK((features.row(0) - features.row(1)).norm() > 0.1);
}

TEST_CASE("refex column growth is 3 -> 9 -> 27 before pruning", "[roles]") {
  // on a path the pruning keeps several distinct columns; just check the
  // retained set is bounded by the raw counts and nonempty
  const Graph p6 = testutil::path_graph(6);
  const Eigen::MatrixXd d0 = refex_features(p6, 0);
  const Eigen::MatrixXd d1 = refex_features(p6, 1);
  const Eigen::MatrixXd d2 = refex_features(p6, 2);
  CHECK(d0.cols() >= 1);
  CHECK(d0.cols() <= 3);
  CHECK(d1.cols() <= 9);
  CHECK(d2.cols() <= 27);
  CHECK(d2.cols() >= d1.cols());
}

TEST_CASE("refex drops constant and strongly correlated columns", "[roles]") {
  const Graph k3 = testutil::triangle_graph();
  // all nodes identical: every column is constant and gets dropped
  CHECK(refex_features(k3, 2).cols() == 0);

  const Graph p6 = testutil::path_graph(6);
  const Eigen::MatrixXd features = refex_features(p6, 2);
  for (Eigen::Index a = 0; a < features.cols(); ++a) {
    for (Eigen::Index b = a + 1; b < features.cols(); ++b) {
      std::vector<double> col_a(features.col(a).data(), features.col(a).data() + features.rows());
      std::vector<double> col_b(features.col(b).data(), features.col(b).data() + features.rows());
      CHECK(graphnoise::detail::pearson(col_a, col_b) <= 0.95 + 1e-12);
    }
  }
}

TEST_CASE("isolated nodes get zero neighbor aggregates", "[roles]") {
  const Graph g = testutil::build({{0, 1}}, 3);  // node 2 isolated
  const Eigen::MatrixXd features = refex_features(g, 2);
  REQUIRE(features.rows() == 3);
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    CHECK(features(2, c) == Catch::Approx(0.0).margin(1e-12));  // min of every retained column
  }
}

TEST_CASE("nmf factors an exact rank-1 matrix to tiny residual", "[roles]") {
  Eigen::MatrixXd v(2, 2);
  v << 1, 2, 2, 4;  // (1,2)^T (1,2)
  const NmfResult result = nmf(v, 1, 2000, 0.0, 7);
  CHECK(result.objective_history.back() < 1e-6);
  CHECK((result.g.array() >= 0).all());
  CHECK((result.f.array() >= 0).all());
}

TEST_CASE("nmf objective is non-increasing every iteration", "[roles]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed + 50);
    const int rows = 3 + static_cast<int>(rng.below(10));
    const int cols = 2 + static_cast<int>(rng.below(7));
    Eigen::MatrixXd v(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) v(i, j) = rng.unit() * 3.0;
    }
    const int rank = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(rows, cols))));
    const NmfResult result = nmf(v, rank, 120, 0.0, seed);
    for (std::size_t i = 1; i < result.objective_history.size(); ++i) {
      const double prev = result.objective_history[i - 1];
      const double cur = result.objective_history[i];
      CHECK(cur <= prev + 1e-9 * std::max(1.0, prev));
    }
  }
}

TEST_CASE("nmf factors the identity", "[roles]") {
  const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(3, 3);
  const NmfResult result = nmf(v, 3, 5000, 0.0, 3);
  CHECK(result.objective_history.back() < 1e-4);
}

TEST_CASE("nmf rejects invalid input", "[roles]") {
  Eigen::MatrixXd v(2, 2);
  v << 1, 2, 3, 4;
  CHECK_THROWS_AS(nmf(v, 0, 10, 0.0, 1), InputError);
  CHECK_THROWS_AS(nmf(v, 3, 10, 0.0, 1), InputError);
  v(0, 0) = -1;
  CHECK_THROWS_AS(nmf(v, 1, 10, 0.0, 1), InputError);
}

TEST_CASE("assign_roles takes the argmax with low-index ties", "[roles]") {
  Eigen::MatrixXd memberships(3, 2);
  memberships << 0.1, 0.9, 0.5, 0.5, 0.7, 0.2;
  CHECK(assign_roles(memberships) == std::vector<int>{1, 0, 0});
}

TEST_CASE("star role model separates the center from the leaves", "[roles]") {
  const Graph star = testutil::star_graph(4);
  const RoleModel model = build_role_model(star, 2, 2, 11);
  REQUIRE(model.assignment.size() == 5);
  const int center_role = model.assignment[0];
  const int leaf_role = model.assignment[1];
  CHECK(center_role != leaf_role);
  for (int leaf = 1; leaf <= 4; ++leaf) CHECK(model.assignment[static_cast<std::size_t>(leaf)] == leaf_role);
}

TEST_CASE("identical feature rows get identical role memberships", "[roles]") {
  const Graph star = testutil::star_graph(6);
  const RoleModel model = build_role_model(star, 2, 2, 23);
  for (int leaf = 2; leaf <= 6; ++leaf) {
    CHECK((model.memberships.row(leaf) - model.memberships.row(1)).norm() == Catch::Approx(0.0).margin(0.0));
  }
}

TEST_CASE("structurally uniform graphs collapse to one role", "[roles]") {
  const RoleModel model = build_role_model(testutil::triangle_graph(), 6, 2, 5);
  CHECK(model.role_count == 1);
  CHECK(model.assignment == std::vector<int>{0, 0, 0});
}

TEST_CASE("requested role count is used when features allow", "[roles]") {
  const Graph ds = testutil::double_star(3);
  const RoleModel model = build_role_model(ds, 2, 2, 9);
  CHECK(model.role_count == 2);
  CHECK(model.memberships.cols() == 2);
  // hubs share a role, leaves share the other
  CHECK(model.assignment[0] == model.assignment[1]);
  CHECK(model.assignment[2] == model.assignment[5]);
  CHECK(model.assignment[0] != model.assignment[2]);
}

TEST_CASE("role model is deterministic for a seed", "[roles]") {
  const Graph g = testutil::random_graph(30, 0.15, 41);
  const RoleModel a = build_role_model(g, 4, 2, 77);
  const RoleModel b = build_role_model(g, 4, 2, 77);
  CHECK(a.assignment == b.assignment);
  CHECK((a.memberships - b.memberships).norm() == 0.0);
}
