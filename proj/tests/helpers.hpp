#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "graphnoise/community.hpp"
#include "graphnoise/graph.hpp"
#include "graphnoise/rng.hpp"

namespace testutil {

using graphnoise::Edge;
using graphnoise::Graph;
using graphnoise::NodeId;

inline Graph build(const std::vector<std::pair<NodeId, NodeId>>& pairs, NodeId n) {
  return graphnoise::from_edge_list(pairs, n).graph;
}

inline Graph path_graph(NodeId n) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 0; v + 1 < n; ++v) pairs.emplace_back(v, v + 1);
  return build(pairs, n);
}

/// Star with center 0 and `leaves` leaves.
inline Graph star_graph(NodeId leaves) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 1; v <= leaves; ++v) pairs.emplace_back(0, v);
  return build(pairs, leaves + 1);
}

inline Graph triangle_graph() { return build({{0, 1}, {0, 2}, {1, 2}}, 3); }

/// Two triangles {0,1,2} and {3,4,5} joined by the bridge (2,3).
inline Graph two_triangles_bridge() {
  return build({{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}}, 6);
}

inline Graph two_disjoint_triangles() { return build({{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}}, 6); }

/// Two hubs (0 and 1) joined to each other, each with `leaves` private leaves.
inline Graph double_star(NodeId leaves) {
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}};
  NodeId next = 2;
  for (NodeId i = 0; i < leaves; ++i) pairs.emplace_back(0, next++);
  for (NodeId i = 0; i < leaves; ++i) pairs.emplace_back(1, next++);
  return build(pairs, next);
}

/// Erdos-Renyi draw with a deterministic seed; resamples (deterministically)
/// until at least one edge exists.
inline Graph random_graph(NodeId n, double p, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    graphnoise::Rng rng(graphnoise::stable_mix({seed, attempt, 0x9e3779b9ULL}));
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (rng.unit() < p) pairs.emplace_back(u, v);
      }
    }
    if (!pairs.empty()) return build(pairs, n);
  }
}

inline std::set<Edge> edge_set(const Graph& g) {
  const auto edges = g.edges();
  return {edges.begin(), edges.end()};
}

/// Brute-force oracle: smallest most-frequent degree via explicit counting.
inline NodeId brute_force_degree_mode(const Graph& g) {
  std::map<NodeId, int> freq;
  for (NodeId v = 0; v < g.node_count(); ++v) ++freq[g.degree(v)];
  NodeId best = freq.begin()->first;
  for (const auto& [deg, count] : freq) {
    if (count > freq.at(best)) best = deg;  // map is ascending, first max wins
  }
  return best;
}

/// Brute-force oracle: maximum modularity over every set partition of the
/// nodes, enumerated via restricted growth strings. Feasible for n <= 8
/// (Bell(8) = 4140 partitions).
inline double brute_force_best_modularity(const Graph& g, double resolution = 1.0) {
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<graphnoise::NodeId> labels(n, 0);
  double best = -1.0;
  auto evaluate = [&]() {
    const NodeId count = *std::max_element(labels.begin(), labels.end()) + 1;
    const double q = graphnoise::modularity(g, graphnoise::Partition{labels, count}, resolution);
    best = std::max(best, q);
  };
  // restricted growth: labels[0] = 0, labels[i] <= max(labels[0..i-1]) + 1
  auto recurse = [&](auto&& self, std::size_t i, NodeId max_label) -> void {
    if (i == n) {
      evaluate();
      return;
    }
    for (NodeId c = 0; c <= max_label + 1; ++c) {
      labels[i] = c;
      self(self, i + 1, std::max(max_label, c));
    }
  };
  recurse(recurse, 1, 0);
  return best;
}

/// Communities of a partition as a set of node sets (label-free comparison).
inline std::set<std::set<NodeId>> community_sets(const graphnoise::Partition& p) {
  std::map<NodeId, std::set<NodeId>> by_label;
  for (std::size_t v = 0; v < p.assignment.size(); ++v) {
    by_label[p.assignment[v]].insert(static_cast<NodeId>(v));
  }
  std::set<std::set<NodeId>> out;
  for (auto& [label, members] : by_label) out.insert(std::move(members));
  return out;
}

}  // namespace testutil
