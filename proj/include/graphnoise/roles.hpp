#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "graphnoise/error.hpp"
#include "graphnoise/graph.hpp"
#include "graphnoise/hash.hpp"
#include "graphnoise/rng.hpp"

namespace graphnoise {

namespace detail {

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a <= 0.0 || var_b <= 0.0) return 0.0;
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace detail

/// Recursive structural features.
///
/// Base columns per node: degree, egonet internal edge count (both endpoints
/// inside {v} ∪ N(v)) and egonet boundary edge count (exactly one endpoint
/// inside). Each recursion round appends, for every column present at the
/// start of the round, its mean and sum over each node's neighbors (isolated
/// nodes get 0). Constant columns are dropped, then any column whose Pearson
/// correlation with an earlier retained column exceeds the threshold is
/// dropped, and the survivors are min-max scaled to [0, 1].
///
/// Pruning uses the signed correlation: an anti-correlated column still
/// separates roles, so it is kept.
inline Eigen::MatrixXd refex_features(const Graph& g, int recursion_depth, double correlation_threshold = 0.95) {
  if (g.node_count() < 1) throw InputError("refex_features needs at least one node");
  if (recursion_depth < 0) throw InputError("recursion_depth must be nonnegative");
  const auto n = static_cast<std::size_t>(g.node_count());

  std::vector<std::vector<double>> columns;
  {
    std::vector<double> degree(n), internal(n), boundary(n);
    std::vector<char> in_ego(n, 0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const auto vi = static_cast<std::size_t>(v);
      degree[vi] = static_cast<double>(g.degree(v));
      in_ego[vi] = 1;
      for (NodeId u : g.neighbors(v)) in_ego[static_cast<std::size_t>(u)] = 1;
      double internal_endpoints = 0.0;  // sum over ego members of their in-ego neighbor count
      double degree_sum = 0.0;
      auto scan = [&](NodeId member) {
        degree_sum += static_cast<double>(g.degree(member));
        for (NodeId u : g.neighbors(member)) {
          if (in_ego[static_cast<std::size_t>(u)]) internal_endpoints += 1.0;
        }
      };
      scan(v);
      for (NodeId u : g.neighbors(v)) scan(u);
      internal[vi] = internal_endpoints / 2.0;
      boundary[vi] = degree_sum - internal_endpoints;
      in_ego[vi] = 0;
      for (NodeId u : g.neighbors(v)) in_ego[static_cast<std::size_t>(u)] = 0;
    }
    columns.push_back(std::move(degree));
    columns.push_back(std::move(internal));
    columns.push_back(std::move(boundary));
  }

  for (int round = 0; round < recursion_depth; ++round) {
    const std::size_t existing = columns.size();
    for (std::size_t c = 0; c < existing; ++c) {
      std::vector<double> nb_mean(n, 0.0), nb_sum(n, 0.0);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        double s = 0.0;
        for (NodeId u : nbrs) s += columns[c][static_cast<std::size_t>(u)];
        nb_sum[static_cast<std::size_t>(v)] = s;
        nb_mean[static_cast<std::size_t>(v)] = s / static_cast<double>(nbrs.size());
      }
      columns.push_back(std::move(nb_mean));
      columns.push_back(std::move(nb_sum));
    }
  }

  // drop constants, then prune correlated columns in order
  std::vector<std::vector<double>> retained;
  for (auto& col : columns) {
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    if (*lo == *hi) continue;
    bool redundant = false;
    for (const auto& kept : retained) {
      if (detail::pearson(kept, col) > correlation_threshold) {
        redundant = true;
        break;
      }
    }
    if (!redundant) retained.push_back(std::move(col));
  }

  Eigen::MatrixXd features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(retained.size()));
  for (std::size_t c = 0; c < retained.size(); ++c) {
    const auto [lo, hi] = std::minmax_element(retained[c].begin(), retained[c].end());
    const double span = *hi - *lo;
    for (std::size_t v = 0; v < n; ++v) {
      features(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(c)) = (retained[c][v] - *lo) / span;
    }
  }
  return features;
}

struct NmfResult {
  Eigen::MatrixXd g;  // node x rank memberships
  Eigen::MatrixXd f;  // rank x feature basis
  std::vector<double> objective_history;  // ||V - GF||_F^2 before and after each iteration
  int iterations = 0;
};

/// Nonnegative matrix factorization by multiplicative updates on the
/// Frobenius objective. Denominators are floored at 1e-12. Initialization is
/// uniform random; rows of G are seeded from the row's feature bytes, so
/// identical feature rows follow identical trajectories and end up with
/// identical memberships.
inline NmfResult nmf(const Eigen::MatrixXd& v, int rank, int max_iterations, double tolerance, std::uint64_t seed) {
  const Eigen::Index n = v.rows(), f = v.cols();
  if (rank < 1 || rank > std::min(n, f)) {
    throw InputError("nmf rank must lie in [1, min(rows, cols)]");
  }
  if ((v.array() < 0.0).any()) throw InputError("nmf input must be nonnegative");
  if (max_iterations < 1) throw InputError("nmf needs at least one iteration");

  constexpr double kFloor = 1e-12;
  NmfResult result;
  result.g.resize(n, rank);
  for (Eigen::Index i = 0; i < n; ++i) {
    Fnv1a row_hash;
    for (Eigen::Index j = 0; j < f; ++j) {
      const double x = v(i, j);
      row_hash.update(&x, sizeof(x));
    }
    Rng row_rng(stable_mix({seed, fnv1a64("nmf-g"), row_hash.digest()}));
    for (Eigen::Index k = 0; k < rank; ++k) result.g(i, k) = row_rng.unit();
  }
  result.f.resize(rank, f);
  Rng f_rng(stable_mix({seed, fnv1a64("nmf-f")}));
  for (Eigen::Index k = 0; k < rank; ++k) {
    for (Eigen::Index j = 0; j < f; ++j) result.f(k, j) = f_rng.unit();
  }

  auto objective = [&]() { return (v - result.g * result.f).squaredNorm(); };
  result.objective_history.push_back(objective());
  for (int it = 0; it < max_iterations; ++it) {
    {
      const Eigen::MatrixXd numer = v * result.f.transpose();
      const Eigen::MatrixXd denom = result.g * (result.f * result.f.transpose());
      result.g = result.g.cwiseProduct(numer.cwiseQuotient(denom.cwiseMax(kFloor)));
    }
    {
      const Eigen::MatrixXd numer = result.g.transpose() * v;
      const Eigen::MatrixXd denom = (result.g.transpose() * result.g) * result.f;
      result.f = result.f.cwiseProduct(numer.cwiseQuotient(denom.cwiseMax(kFloor)));
    }
    const double prev = result.objective_history.back();
    const double cur = objective();
    result.objective_history.push_back(cur);
    result.iterations = it + 1;
    if (prev > 0.0 && std::abs(prev - cur) / prev < tolerance) break;
    if (prev == 0.0) break;
  }
  return result;
}

/// Row-wise argmax with ties resolved toward the lowest index.
inline std::vector<int> assign_roles(const Eigen::MatrixXd& memberships) {
  std::vector<int> assignment(static_cast<std::size_t>(memberships.rows()), 0);
  for (Eigen::Index i = 0; i < memberships.rows(); ++i) {
    int best = 0;
    for (Eigen::Index k = 1; k < memberships.cols(); ++k) {
      if (memberships(i, k) > memberships(i, best)) best = static_cast<int>(k);
    }
    assignment[static_cast<std::size_t>(i)] = best;
  }
  return assignment;
}

/// Structural role model: recursive features, their factorization and the
/// per-node role assignment.
struct RoleModel {
  Eigen::MatrixXd features;     // node x feature
  Eigen::MatrixXd memberships;  // node x role
  Eigen::MatrixXd basis;        // role x feature
  std::vector<int> assignment;
  int role_count = 0;  // effective rank actually used
};

/// Comma-separated dump of a feature matrix, one node per row.
inline void write_features(const Eigen::MatrixXd& features, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      char buffer[32];
      const auto r = std::to_chars(buffer, buffer + sizeof(buffer), features(i, j));
      if (j > 0) out << ',';
      out << std::string_view(buffer, static_cast<std::size_t>(r.ptr - buffer));
    }
    out << "\n";
  }
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

/// Runs the full role pipeline. The requested role count is clamped to the
/// feature matrix dimensions; when every feature is constant (all nodes
/// structurally identical) the graph collapses to a single role.
inline RoleModel build_role_model(const Graph& g, int role_count, int recursion_depth, std::uint64_t seed,
                                  int nmf_max_iterations = 300, double nmf_tolerance = 1e-6) {
  if (role_count < 1) throw InputError("role_count must be positive");
  RoleModel model;
  model.features = refex_features(g, recursion_depth);
  const auto n = model.features.rows();
  if (model.features.cols() == 0) {
    model.memberships = Eigen::MatrixXd::Ones(n, 1);
    model.basis = Eigen::MatrixXd::Zero(1, 0);
    model.assignment.assign(static_cast<std::size_t>(n), 0);
    model.role_count = 1;
    return model;
  }
  const int rank = std::min<int>({role_count, static_cast<int>(model.features.cols()), static_cast<int>(n)});
  NmfResult factors = nmf(model.features, rank, nmf_max_iterations, nmf_tolerance, seed);
  model.memberships = std::move(factors.g);
  model.basis = std::move(factors.f);
  model.assignment = assign_roles(model.memberships);
  model.role_count = rank;
  return model;
}

}  // namespace graphnoise
