#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "graphnoise/error.hpp"
#include "graphnoise/graph.hpp"
#include "graphnoise/rng.hpp"

namespace graphnoise {

enum class NoiseLevel { Local, Community, Global };
enum class NoiseOp { Delete, Flip, Add };

inline constexpr int kDefaultRoleCount = 6;

constexpr std::string_view to_string(NoiseLevel level) noexcept {
  switch (level) {
    case NoiseLevel::Local: return "local";
    case NoiseLevel::Community: return "community";
    case NoiseLevel::Global: return "global";
  }
  return "?";
}

constexpr std::string_view to_string(NoiseOp op) noexcept {
  switch (op) {
    case NoiseOp::Delete: return "delete";
    case NoiseOp::Flip: return "flip";
    case NoiseOp::Add: return "add";
  }
  return "?";
}

inline std::optional<NoiseLevel> parse_noise_level(std::string_view text) noexcept {
  if (text == "local") return NoiseLevel::Local;
  if (text == "community") return NoiseLevel::Community;
  if (text == "global") return NoiseLevel::Global;
  return std::nullopt;
}

inline std::optional<NoiseOp> parse_noise_op(std::string_view text) noexcept {
  if (text == "delete") return NoiseOp::Delete;
  if (text == "flip") return NoiseOp::Flip;
  if (text == "add") return NoiseOp::Add;
  return std::nullopt;
}

/// Full description of one perturbation; the reproducibility unit.
struct NoiseSpec {
  NoiseLevel level = NoiseLevel::Local;
  NoiseOp op = NoiseOp::Flip;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::optional<NodeId> threshold_override;
  std::optional<double> community_resolution;
  std::optional<int> role_count;

  int effective_role_count() const noexcept { return role_count.value_or(kDefaultRoleCount); }
  double effective_resolution() const noexcept { return community_resolution.value_or(1.0); }

  void validate() const {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw InputError("noise ratio must lie in (0, 1]");
    if (role_count && *role_count < 2) throw InputError("role_count must be at least 2");
    if (community_resolution && !(*community_resolution > 0.0)) {
      throw InputError("community_resolution must be positive");
    }
    if (threshold_override && *threshold_override < 0) throw InputError("threshold_override must be nonnegative");
  }
};

/// What a perturbation did: net deleted/added edges, pairs that could not be
/// replaced, and (for local noise) the targeted nodes and threshold used.
/// Community and global flips list edges in processing order, so deleted[i]
/// is the edge that added[i] replaced; local reports are canonically sorted
/// net deltas.
struct PerturbationReport {
  std::vector<Edge> deleted;
  std::vector<Edge> added;
  std::size_t skipped_pairs = 0;
  std::vector<NodeId> targets;
  std::optional<NodeId> threshold;
};

/// ceil(ratio * count), clamped to [1, count] for ratio in (0, 1] and
/// guarded against floating-point dust just above an integer boundary.
inline std::size_t scaled_count(std::size_t count, double ratio) {
  if (count == 0) return 0;
  const double raw = ratio * static_cast<double>(count);
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  if (k < 1) k = 1;
  if (k > count) k = count;
  return k;
}

namespace detail {

/// Net edge delta of an interleaved perturbation. Deleting an edge that was
/// added earlier in the same run cancels instead of being reported, so the
/// report always satisfies deleted ⊆ original and added ∩ original = ∅.
class EdgeDeltaLog {
 public:
  void record_removed(Edge e) {
    if (added_.erase(e) == 0) deleted_.insert(e);
  }
  void record_added(Edge e) {
    if (deleted_.erase(e) == 0) added_.insert(e);
  }
  std::vector<Edge> deleted() const { return {deleted_.begin(), deleted_.end()}; }
  std::vector<Edge> added() const { return {added_.begin(), added_.end()}; }

 private:
  std::set<Edge> deleted_;
  std::set<Edge> added_;
};

/// Uniform pair {x, y} ⊆ pool, x != y, absent from both graphs.
template <AdjacencyQueryable Current, AdjacencyQueryable Original>
std::optional<Edge> sample_pair_within(const std::vector<NodeId>& pool, const Current& current,
                                       const Original& original, Rng& rng) {
  if (pool.size() < 2) return std::nullopt;
  const auto valid = [&](NodeId x, NodeId y) {
    return x != y && !current.has_edge(x, y) && !original.has_edge(x, y);
  };
  constexpr int kAttempts = 200;
  for (int i = 0; i < kAttempts; ++i) {
    const NodeId x = pool[rng.index(pool.size())];
    const NodeId y = pool[rng.index(pool.size())];
    if (valid(x, y)) return make_edge(x, y);
  }
  std::vector<Edge> candidates;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      if (valid(pool[i], pool[j])) candidates.push_back(make_edge(pool[i], pool[j]));
    }
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[rng.index(candidates.size())];
}

/// Uniform pair with x from pool_a and y from pool_b (disjoint pools),
/// absent from both graphs.
template <AdjacencyQueryable Current, AdjacencyQueryable Original>
std::optional<Edge> sample_pair_labeled(const std::vector<NodeId>& pool_a, const std::vector<NodeId>& pool_b,
                                        const Current& current, const Original& original, Rng& rng) {
  if (pool_a.empty() || pool_b.empty()) return std::nullopt;
  const auto valid = [&](NodeId x, NodeId y) {
    return x != y && !current.has_edge(x, y) && !original.has_edge(x, y);
  };
  constexpr int kAttempts = 200;
  for (int i = 0; i < kAttempts; ++i) {
    const NodeId x = pool_a[rng.index(pool_a.size())];
    const NodeId y = pool_b[rng.index(pool_b.size())];
    if (valid(x, y)) return make_edge(x, y);
  }
  std::vector<Edge> candidates;
  for (NodeId x : pool_a) {
    for (NodeId y : pool_b) {
      if (valid(x, y)) candidates.push_back(make_edge(x, y));
    }
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[rng.index(candidates.size())];
}

/// Uniform pair whose endpoints carry different labels, absent from both
/// graphs. labels[v] is the class of node v.
template <AdjacencyQueryable Current, AdjacencyQueryable Original>
std::optional<Edge> sample_pair_across(const std::vector<NodeId>& labels, const Current& current,
                                       const Original& original, Rng& rng) {
  const auto n = static_cast<std::size_t>(current.node_count());
  if (n < 2) return std::nullopt;
  const auto valid = [&](NodeId x, NodeId y) {
    return x != y && labels[static_cast<std::size_t>(x)] != labels[static_cast<std::size_t>(y)] &&
           !current.has_edge(x, y) && !original.has_edge(x, y);
  };
  constexpr int kAttempts = 200;
  for (int i = 0; i < kAttempts; ++i) {
    const auto x = static_cast<NodeId>(rng.index(n));
    const auto y = static_cast<NodeId>(rng.index(n));
    if (valid(x, y)) return make_edge(x, y);
  }
  std::vector<Edge> candidates;
  for (NodeId x = 0; x < static_cast<NodeId>(n); ++x) {
    for (NodeId y = x + 1; y < static_cast<NodeId>(n); ++y) {
      if (valid(x, y)) candidates.push_back(Edge{x, y});
    }
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[rng.index(candidates.size())];
}

}  // namespace detail

}  // namespace graphnoise
