#pragma once

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphnoise/error.hpp"
#include "graphnoise/rng.hpp"

namespace graphnoise {

using NodeId = std::int32_t;

/// Undirected edge stored with endpoints ordered (min, max).
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) noexcept { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Anything that can answer node count and edge membership queries.
/// Satisfied by Graph and GraphEditor, so samplers work on either.
template <typename G>
concept AdjacencyQueryable = requires(const G& g, NodeId v) {
  { g.node_count() } -> std::convertible_to<NodeId>;
  { g.has_edge(v, v) } -> std::convertible_to<bool>;
};

namespace detail {

inline bool sorted_contains(const std::vector<NodeId>& sorted, NodeId x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

inline bool sorted_insert(std::vector<NodeId>& sorted, NodeId x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it != sorted.end() && *it == x) return false;
  sorted.insert(it, x);
  return true;
}

inline bool sorted_erase(std::vector<NodeId>& sorted, NodeId x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) return false;
  sorted.erase(it);
  return true;
}

}  // namespace detail

/// Simple undirected graph over dense node ids [0, node_count).
///
/// Invariants: no self-loops, no parallel edges, adjacency symmetric.
/// Immutable once constructed; mutations go through GraphEditor, which
/// produces a fresh Graph. Neighbor lists are kept sorted so seeded
/// sampling visits candidates in the same order everywhere.
class Graph {
 public:
  Graph() = default;

  NodeId node_count() const noexcept { return static_cast<NodeId>(adj_.size()); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  NodeId degree(NodeId v) const { return static_cast<NodeId>(adj_[checked(v)].size()); }

  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[checked(v)]; }

  bool has_edge(NodeId u, NodeId v) const {
    checked(u);
    checked(v);
    if (u == v) return false;
    // probe the smaller adjacency list
    if (adj_[static_cast<std::size_t>(u)].size() > adj_[static_cast<std::size_t>(v)].size()) std::swap(u, v);
    return detail::sorted_contains(adj_[static_cast<std::size_t>(u)], v);
  }

  /// All edges as (min, max) pairs in ascending order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId v = 0; v < node_count(); ++v) {
      for (NodeId u : adj_[static_cast<std::size_t>(v)]) {
        if (u > v) out.push_back(Edge{v, u});
      }
    }
    return out;
  }

  /// Throws InputError if any structural invariant is broken.
  void validate() const {
    std::size_t endpoint_count = 0;
    for (NodeId v = 0; v < node_count(); ++v) {
      const auto& nbrs = adj_[static_cast<std::size_t>(v)];
      endpoint_count += nbrs.size();
      NodeId prev = -1;
      for (NodeId u : nbrs) {
        if (u < 0 || u >= node_count()) throw InputError("graph validation: neighbor id out of range");
        if (u == v) throw InputError("graph validation: self-loop at node " + std::to_string(v));
        if (u <= prev) throw InputError("graph validation: adjacency list not strictly sorted");
        if (!detail::sorted_contains(adj_[static_cast<std::size_t>(u)], v)) {
          throw InputError("graph validation: asymmetric edge (" + std::to_string(v) + "," + std::to_string(u) + ")");
        }
        prev = u;
      }
    }
    if (endpoint_count != 2 * edge_count_) throw InputError("graph validation: edge count mismatch");
  }

 private:
  friend class GraphEditor;
  friend struct GraphFactory;

  std::size_t checked(NodeId v) const {
    if (v < 0 || v >= node_count()) {
      throw InputError("node id " + std::to_string(v) + " out of range [0, " + std::to_string(node_count()) + ")");
    }
    return static_cast<std::size_t>(v);
  }

  std::vector<std::vector<NodeId>> adj_;
  std::size_t edge_count_ = 0;
};

struct GraphBuildResult {
  Graph graph;
  std::size_t duplicates_collapsed = 0;
};

struct GraphFactory {
  static Graph adopt(std::vector<std::vector<NodeId>> adj, std::size_t edge_count) {
    Graph g;
    g.adj_ = std::move(adj);
    g.edge_count_ = edge_count;
    return g;
  }
};

/// Builds a Graph from unordered node-id pairs. Self-loops are rejected;
/// duplicate pairs (in either order) collapse to one edge and are counted
/// in the returned report.
inline GraphBuildResult from_edge_list(const std::vector<std::pair<NodeId, NodeId>>& pairs, NodeId node_count) {
  if (node_count < 0) throw InputError("node_count must be nonnegative");
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(node_count));
  std::size_t edge_count = 0;
  std::size_t duplicates = 0;
  for (const auto& [a, b] : pairs) {
    if (a < 0 || a >= node_count || b < 0 || b >= node_count) {
      throw InputError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") has node id out of range [0, " +
                       std::to_string(node_count) + ")");
    }
    if (a == b) throw InputError("self-loop (" + std::to_string(a) + "," + std::to_string(a) + ") is not allowed");
    if (detail::sorted_insert(adj[static_cast<std::size_t>(a)], b)) {
      detail::sorted_insert(adj[static_cast<std::size_t>(b)], a);
      ++edge_count;
    } else {
      ++duplicates;
    }
  }
  return GraphBuildResult{GraphFactory::adopt(std::move(adj), edge_count), duplicates};
}

/// Builder-style mutable copy of a Graph. Offers the same query surface as
/// Graph plus edge add/remove; build() yields the resulting Graph.
class GraphEditor {
 public:
  explicit GraphEditor(const Graph& g) : adj_(g.adj_), edge_count_(g.edge_count_) {}

  NodeId node_count() const noexcept { return static_cast<NodeId>(adj_.size()); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  NodeId degree(NodeId v) const { return static_cast<NodeId>(adj_[checked(v)].size()); }

  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[checked(v)]; }

  /// i-th smallest current neighbor of v.
  NodeId neighbor_at(NodeId v, std::size_t i) const {
    const auto& nbrs = adj_[checked(v)];
    if (i >= nbrs.size()) throw InputError("neighbor index out of range");
    return nbrs[i];
  }

  bool has_edge(NodeId u, NodeId v) const {
    checked(u);
    checked(v);
    if (u == v) return false;
    if (adj_[static_cast<std::size_t>(u)].size() > adj_[static_cast<std::size_t>(v)].size()) std::swap(u, v);
    return detail::sorted_contains(adj_[static_cast<std::size_t>(u)], v);
  }

  /// Returns false (no-op) when the edge already exists.
  bool add_edge(NodeId u, NodeId v) {
    checked(u);
    checked(v);
    if (u == v) throw InputError("cannot add self-loop at node " + std::to_string(u));
    if (!detail::sorted_insert(adj_[static_cast<std::size_t>(u)], v)) return false;
    detail::sorted_insert(adj_[static_cast<std::size_t>(v)], u);
    ++edge_count_;
    return true;
  }

  /// Returns false (no-op) when the edge is absent.
  bool remove_edge(NodeId u, NodeId v) {
    checked(u);
    checked(v);
    if (!detail::sorted_erase(adj_[static_cast<std::size_t>(u)], v)) return false;
    detail::sorted_erase(adj_[static_cast<std::size_t>(v)], u);
    --edge_count_;
    return true;
  }

  Graph build() const& { return GraphFactory::adopt(adj_, edge_count_); }
  Graph build() && { return GraphFactory::adopt(std::move(adj_), edge_count_); }

 private:
  std::size_t checked(NodeId v) const {
    if (v < 0 || v >= node_count()) {
      throw InputError("node id " + std::to_string(v) + " out of range [0, " + std::to_string(node_count()) + ")");
    }
    return static_cast<std::size_t>(v);
  }

  std::vector<std::vector<NodeId>> adj_;
  std::size_t edge_count_ = 0;
};

struct DegreeStats {
  std::vector<NodeId> degrees;
  NodeId mode = 0;
};

/// Degree histogram mode; ties broken toward the smallest degree value.
inline DegreeStats degree_stats(const Graph& g) {
  if (g.node_count() == 0) throw InputError("degree statistics need at least one node");
  DegreeStats stats;
  stats.degrees.reserve(static_cast<std::size_t>(g.node_count()));
  NodeId max_degree = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const NodeId d = g.degree(v);
    stats.degrees.push_back(d);
    max_degree = std::max(max_degree, d);
  }
  std::vector<std::size_t> freq(static_cast<std::size_t>(max_degree) + 1, 0);
  for (NodeId d : stats.degrees) ++freq[static_cast<std::size_t>(d)];
  std::size_t best = 0;
  for (std::size_t d = 0; d <= static_cast<std::size_t>(max_degree); ++d) {
    if (freq[d] > freq[best]) best = d;  // strict: first (smallest) wins ties
  }
  stats.mode = static_cast<NodeId>(best);
  return stats;
}

inline NodeId degree_mode(const Graph& g) { return degree_stats(g).mode; }

/// Uniformly random endpoint u for a replacement edge at v: u != v and
/// {u, v} is an edge in neither `current` nor `original`. Returns nullopt
/// when no such node exists. Rejection sampling with an exhaustive
/// fallback, so the draw stays uniform over the candidate set.
template <AdjacencyQueryable Current, AdjacencyQueryable Original>
std::optional<NodeId> sample_replacement_endpoint(const Current& current, const Original& original, NodeId v,
                                                  Rng& rng) {
  const NodeId n = current.node_count();
  if (n != original.node_count()) throw InputError("current and original graphs differ in node count");
  if (v < 0 || v >= n) throw InputError("node id " + std::to_string(v) + " out of range");
  const auto valid = [&](NodeId u) { return u != v && !current.has_edge(u, v) && !original.has_edge(u, v); };
  if (n > 1) {
    constexpr int kAttempts = 64;
    for (int i = 0; i < kAttempts; ++i) {
      const NodeId u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
      if (valid(u)) return u;
    }
  }
  std::vector<NodeId> candidates;
  for (NodeId u = 0; u < n; ++u) {
    if (valid(u)) candidates.push_back(u);
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[rng.index(candidates.size())];
}

}  // namespace graphnoise
