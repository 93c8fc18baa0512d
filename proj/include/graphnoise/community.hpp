#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "graphnoise/error.hpp"
#include "graphnoise/graph.hpp"
#include "graphnoise/rng.hpp"

namespace graphnoise {

/// Node-to-community assignment with dense community ids.
struct Partition {
  std::vector<NodeId> assignment;
  NodeId community_count = 0;

  /// Renumbers arbitrary nonnegative labels densely in order of first
  /// appearance.
  static Partition compact(std::vector<NodeId> labels) {
    Partition p;
    NodeId max_label = -1;
    for (NodeId c : labels) max_label = std::max(max_label, c);
    std::vector<NodeId> remap(static_cast<std::size_t>(max_label) + 1, -1);
    NodeId next = 0;
    for (NodeId& c : labels) {
      auto idx = static_cast<std::size_t>(c);
      if (remap[idx] < 0) remap[idx] = next++;
      c = remap[idx];
    }
    p.assignment = std::move(labels);
    p.community_count = next;
    return p;
  }
};

/// Newman modularity Q = sum_c [ e_c/m - gamma * (d_c / 2m)^2 ] where e_c is
/// the number of intra-community edges, d_c the total degree of community c,
/// and m the number of edges.
inline double modularity(const Graph& g, const Partition& p, double resolution = 1.0) {
  if (g.edge_count() == 0) throw InputError("modularity is undefined for an edgeless graph");
  if (p.assignment.size() != static_cast<std::size_t>(g.node_count())) {
    throw InputError("partition does not cover the graph");
  }
  const auto communities = static_cast<std::size_t>(p.community_count);
  std::vector<double> intra(communities, 0.0);
  std::vector<double> degree_sum(communities, 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const NodeId c = p.assignment[static_cast<std::size_t>(v)];
    if (c < 0 || c >= p.community_count) throw InputError("community id out of range");
    degree_sum[static_cast<std::size_t>(c)] += g.degree(v);
    for (NodeId u : g.neighbors(v)) {
      if (u > v && p.assignment[static_cast<std::size_t>(u)] == c) intra[static_cast<std::size_t>(c)] += 1.0;
    }
  }
  const double m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (std::size_t c = 0; c < communities; ++c) {
    const double fraction = degree_sum[c] / (2.0 * m);
    q += intra[c] / m - resolution * fraction * fraction;
  }
  return q;
}

namespace detail {

/// Weighted multigraph used between aggregation levels. Self-loop weight is
/// counted once in total_weight and twice in node strength.
struct LevelGraph {
  std::vector<std::vector<std::pair<NodeId, double>>> adj;  // sorted by neighbor, no self entries
  std::vector<double> self_weight;
  std::vector<double> strength;
  double total_weight = 0.0;

  NodeId node_count() const noexcept { return static_cast<NodeId>(adj.size()); }
};

inline LevelGraph lift(const Graph& g) {
  LevelGraph lg;
  const auto n = static_cast<std::size_t>(g.node_count());
  lg.adj.resize(n);
  lg.self_weight.assign(n, 0.0);
  lg.strength.assign(n, 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto& row = lg.adj[static_cast<std::size_t>(v)];
    row.reserve(g.neighbors(v).size());
    for (NodeId u : g.neighbors(v)) row.emplace_back(u, 1.0);
    lg.strength[static_cast<std::size_t>(v)] = static_cast<double>(g.degree(v));
  }
  lg.total_weight = static_cast<double>(g.edge_count());
  return lg;
}

/// Louvain local moves from an initial assignment: visit nodes in seeded
/// random order (reshuffled every pass) and move each to the neighboring
/// community with the largest strictly positive modularity gain, staying
/// put if none; ties between equal best gains are broken uniformly at
/// random. Repeats until a full pass moves nothing.
/// Returns (dense community labels, whether any node moved).
inline std::pair<std::vector<NodeId>, bool> local_moves(const LevelGraph& lg, double resolution, Rng& rng,
                                                        std::vector<NodeId> community) {
  const auto n = static_cast<std::size_t>(lg.node_count());
  std::vector<double> community_strength(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    community_strength[static_cast<std::size_t>(community[v])] += lg.strength[v];
  }

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});

  const double two_m = 2.0 * lg.total_weight;
  std::vector<double> weight_to(n, 0.0);
  std::vector<NodeId> touched;
  std::vector<NodeId> ties;
  bool any_move = false;

  for (;;) {
    std::size_t moves = 0;
    rng.shuffle(order);
    for (NodeId v : order) {
      const auto vi = static_cast<std::size_t>(v);
      touched.clear();
      for (const auto& [u, w] : lg.adj[vi]) {
        const NodeId c = community[static_cast<std::size_t>(u)];
        if (weight_to[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        weight_to[static_cast<std::size_t>(c)] += w;
      }
      std::sort(touched.begin(), touched.end());

      const NodeId c_old = community[vi];
      community_strength[static_cast<std::size_t>(c_old)] -= lg.strength[vi];

      const double stay_gain =
          weight_to[static_cast<std::size_t>(c_old)] -
          resolution * community_strength[static_cast<std::size_t>(c_old)] * lg.strength[vi] / two_m;
      double best_gain = stay_gain;
      ties.clear();
      for (NodeId c : touched) {
        if (c == c_old) continue;
        const double gain = weight_to[static_cast<std::size_t>(c)] -
                            resolution * community_strength[static_cast<std::size_t>(c)] * lg.strength[vi] / two_m;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          ties.clear();
          ties.push_back(c);
        } else if (!ties.empty() && gain > best_gain - 1e-12) {
          ties.push_back(c);
        }
      }
      const NodeId best = ties.empty() ? c_old : ties[rng.index(ties.size())];

      community_strength[static_cast<std::size_t>(best)] += lg.strength[vi];
      community[vi] = best;
      if (best != c_old) ++moves;

      for (NodeId c : touched) weight_to[static_cast<std::size_t>(c)] = 0.0;
    }
    if (moves == 0) break;
    any_move = true;
  }

  Partition compacted = Partition::compact(std::move(community));
  return {std::move(compacted.assignment), any_move};
}

/// Contracts communities into super-nodes: intra-community weight becomes a
/// self-loop, cross weights accumulate on the super-edges.
inline LevelGraph aggregate(const LevelGraph& lg, const std::vector<NodeId>& community, NodeId community_count) {
  LevelGraph out;
  const auto k = static_cast<std::size_t>(community_count);
  out.adj.resize(k);
  out.self_weight.assign(k, 0.0);
  out.strength.assign(k, 0.0);
  out.total_weight = lg.total_weight;

  std::vector<std::map<NodeId, double>> cross(k);
  for (NodeId v = 0; v < lg.node_count(); ++v) {
    const auto vi = static_cast<std::size_t>(v);
    const NodeId cv = community[vi];
    out.self_weight[static_cast<std::size_t>(cv)] += lg.self_weight[vi];
    for (const auto& [u, w] : lg.adj[vi]) {
      if (u < v) continue;  // count each undirected edge once
      const NodeId cu = community[static_cast<std::size_t>(u)];
      if (cu == cv) {
        out.self_weight[static_cast<std::size_t>(cv)] += w;
      } else {
        cross[static_cast<std::size_t>(cv)][cu] += w;
        cross[static_cast<std::size_t>(cu)][cv] += w;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    out.adj[c].assign(cross[c].begin(), cross[c].end());
    double s = 2.0 * out.self_weight[c];
    for (const auto& [u, w] : out.adj[c]) s += w;
    out.strength[c] = s;
  }
  return out;
}

}  // namespace detail

struct LouvainResult {
  Partition partition;
  /// Modularity of the flattened partition after each level; non-decreasing.
  std::vector<double> level_modularity;
};

namespace detail {

/// One full Louvain run from an initial node-level partition: local moves,
/// aggregation, repeat until a level yields no improvement, then refinement
/// rounds (local moves on the original graph restarting the cycle from the
/// flattened partition) until modularity stops improving.
inline LouvainResult louvain_run(const Graph& g, Rng& rng, double resolution, std::vector<NodeId> init) {
  const auto n = static_cast<std::size_t>(g.node_count());
  LouvainResult result;
  std::vector<NodeId> flat = std::move(init);
  double last_q = -2.0;
  for (;;) {  // refinement rounds
    LevelGraph level = lift(g);
    std::vector<NodeId> position(n);  // original node -> current level node
    std::iota(position.begin(), position.end(), NodeId{0});
    bool first_level = true;
    for (;;) {  // aggregation levels
      std::vector<NodeId> start;
      if (first_level) {
        start = flat;
        first_level = false;
      } else {
        start.resize(static_cast<std::size_t>(level.node_count()));
        std::iota(start.begin(), start.end(), NodeId{0});
      }
      auto [community, moved] = local_moves(level, resolution, rng, std::move(start));
      for (std::size_t v = 0; v < n; ++v) flat[v] = community[static_cast<std::size_t>(position[v])];
      position = flat;
      const NodeId community_count = *std::max_element(community.begin(), community.end()) + 1;
      result.partition = Partition{flat, community_count};
      result.level_modularity.push_back(modularity(g, result.partition, resolution));
      if (!moved || community_count == level.node_count()) break;  // no contraction possible
      level = aggregate(level, community, community_count);
    }
    const double q = result.level_modularity.back();
    if (q <= last_q + 1e-12) break;
    last_q = q;
  }
  return result;
}

}  // namespace detail

inline constexpr int kLouvainRestarts = 16;

/// Louvain community detection: alternating local-move and aggregation
/// phases until a full level yields no improvement, with multilevel
/// refinement. Greedy local moves are order-dependent, so the search runs
/// `restarts` times — once from singletons, then from seeded random initial
/// partitions — and keeps the best-modularity result. Fully deterministic
/// per seed.
inline LouvainResult louvain_detailed(const Graph& g, std::uint64_t seed, double resolution = 1.0,
                                      int restarts = kLouvainRestarts) {
  if (g.edge_count() == 0) throw InputError("louvain requires at least one edge");
  if (restarts < 1) throw InputError("louvain needs at least one restart");
  const auto n = static_cast<std::size_t>(g.node_count());

  LouvainResult best;
  for (int r = 0; r < restarts; ++r) {
    const std::uint64_t run_seed = stable_mix({seed, fnv1a64("louvain"), static_cast<std::uint64_t>(r)});
    Rng rng(run_seed);
    std::vector<NodeId> init(n);
    std::iota(init.begin(), init.end(), NodeId{0});
    if (r > 0) {
      const auto communities = 1 + rng.below(n);
      for (auto& c : init) c = static_cast<NodeId>(rng.below(communities));
      init = Partition::compact(std::move(init)).assignment;
    }
    LouvainResult result = detail::louvain_run(g, rng, resolution, std::move(init));
    if (best.level_modularity.empty() || result.level_modularity.back() > best.level_modularity.back()) {
      best = std::move(result);
    }
  }
  return best;
}

inline Partition louvain(const Graph& g, std::uint64_t seed, double resolution = 1.0) {
  return louvain_detailed(g, seed, resolution).partition;
}

}  // namespace graphnoise
