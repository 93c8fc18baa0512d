#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "graphnoise/graph.hpp"
#include "graphnoise/noise.hpp"

namespace graphnoise {

struct RoleEdgeClasses {
  std::vector<Edge> within;
  std::vector<Edge> between;
};

/// Splits the edge set by role assignment: within edges join nodes of one
/// role, between edges join different roles.
inline RoleEdgeClasses classify_edges_by_role(const Graph& g, const std::vector<int>& roles) {
  if (roles.size() != static_cast<std::size_t>(g.node_count())) {
    throw InputError("role assignment does not cover the graph");
  }
  RoleEdgeClasses classes;
  for (const Edge& e : g.edges()) {
    const bool same = roles[static_cast<std::size_t>(e.u)] == roles[static_cast<std::size_t>(e.v)];
    (same ? classes.within : classes.between).push_back(e);
  }
  return classes;
}

namespace detail {

inline std::vector<std::vector<NodeId>> members_by_role(const std::vector<int>& roles) {
  int role_count = 0;
  for (int r : roles) role_count = std::max(role_count, r + 1);
  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(role_count));
  for (std::size_t v = 0; v < roles.size(); ++v) {
    if (roles[v] < 0) throw InputError("role ids must be nonnegative");
    members[static_cast<std::size_t>(roles[v])].push_back(static_cast<NodeId>(v));
  }
  return members;
}

}  // namespace detail

/// Global flip. Within-role edges follow the community flip's intra rule
/// (replacement inside the same role set). For between-role edges, each
/// deleted edge with role pair (a, b) is replaced by a new edge whose
/// endpoints carry exactly the roles a and b; impossible replacements roll
/// back, so the edge count is preserved exactly.
inline std::pair<Graph, PerturbationReport> global_flip(const Graph& g, const std::vector<int>& roles,
                                                        const NoiseSpec& spec) {
  spec.validate();
  const RoleEdgeClasses classes = classify_edges_by_role(g, roles);
  const auto members = detail::members_by_role(roles);

  Rng rng(spec.seed);
  const auto within_sample = rng.sample(classes.within, scaled_count(classes.within.size(), spec.ratio));
  const auto between_sample = rng.sample(classes.between, scaled_count(classes.between.size(), spec.ratio));

  GraphEditor editor(g);
  PerturbationReport report;
  for (const Edge& e : within_sample) editor.remove_edge(e.u, e.v);
  for (const Edge& e : between_sample) editor.remove_edge(e.u, e.v);

  for (const Edge& e : within_sample) {
    const int role = roles[static_cast<std::size_t>(e.u)];
    if (const auto pick = detail::sample_pair_within(members[static_cast<std::size_t>(role)], editor, g, rng)) {
      editor.add_edge(pick->u, pick->v);
      report.deleted.push_back(e);
      report.added.push_back(*pick);
    } else {
      editor.add_edge(e.u, e.v);  // roll back
      ++report.skipped_pairs;
    }
  }
  for (const Edge& e : between_sample) {
    const int role_a = roles[static_cast<std::size_t>(e.u)];
    const int role_b = roles[static_cast<std::size_t>(e.v)];
    if (const auto pick = detail::sample_pair_labeled(members[static_cast<std::size_t>(role_a)],
                                                      members[static_cast<std::size_t>(role_b)], editor, g, rng)) {
      editor.add_edge(pick->u, pick->v);
      report.deleted.push_back(e);
      report.added.push_back(*pick);
    } else {
      editor.add_edge(e.u, e.v);
      ++report.skipped_pairs;
    }
  }
  return {std::move(editor).build(), std::move(report)};
}

/// Deletes the sampled within and between edges with no replacements.
inline std::pair<Graph, PerturbationReport> global_delete(const Graph& g, const std::vector<int>& roles,
                                                          const NoiseSpec& spec) {
  spec.validate();
  const RoleEdgeClasses classes = classify_edges_by_role(g, roles);
  Rng rng(spec.seed);
  const auto within_sample = rng.sample(classes.within, scaled_count(classes.within.size(), spec.ratio));
  const auto between_sample = rng.sample(classes.between, scaled_count(classes.between.size(), spec.ratio));

  GraphEditor editor(g);
  PerturbationReport report;
  for (const Edge& e : within_sample) {
    editor.remove_edge(e.u, e.v);
    report.deleted.push_back(e);
  }
  for (const Edge& e : between_sample) {
    editor.remove_edge(e.u, e.v);
    report.deleted.push_back(e);
  }
  return {std::move(editor).build(), std::move(report)};
}

/// Adds new edges with the flip's endpoint-role constraints and no
/// deletions. Within additions target the role set of a uniformly sampled
/// existing within edge; each between addition is constrained to the role
/// pair of a uniformly sampled existing between edge.
inline std::pair<Graph, PerturbationReport> global_add(const Graph& g, const std::vector<int>& roles,
                                                       const NoiseSpec& spec) {
  spec.validate();
  const RoleEdgeClasses classes = classify_edges_by_role(g, roles);
  const auto members = detail::members_by_role(roles);

  Rng rng(spec.seed);
  const auto within_anchors = rng.sample(classes.within, scaled_count(classes.within.size(), spec.ratio));
  const auto between_anchors = rng.sample(classes.between, scaled_count(classes.between.size(), spec.ratio));

  GraphEditor editor(g);
  PerturbationReport report;
  for (const Edge& anchor : within_anchors) {
    const int role = roles[static_cast<std::size_t>(anchor.u)];
    if (const auto pick = detail::sample_pair_within(members[static_cast<std::size_t>(role)], editor, g, rng)) {
      editor.add_edge(pick->u, pick->v);
      report.added.push_back(*pick);
    } else {
      ++report.skipped_pairs;
    }
  }
  for (const Edge& anchor : between_anchors) {
    const int role_a = roles[static_cast<std::size_t>(anchor.u)];
    const int role_b = roles[static_cast<std::size_t>(anchor.v)];
    if (const auto pick = detail::sample_pair_labeled(members[static_cast<std::size_t>(role_a)],
                                                      members[static_cast<std::size_t>(role_b)], editor, g, rng)) {
      editor.add_edge(pick->u, pick->v);
      report.added.push_back(*pick);
    } else {
      ++report.skipped_pairs;
    }
  }
  return {std::move(editor).build(), std::move(report)};
}

inline std::pair<Graph, PerturbationReport> apply_global_noise(const Graph& g, const std::vector<int>& roles,
                                                               const NoiseSpec& spec) {
  if (spec.level != NoiseLevel::Global) throw InputError("apply_global_noise requires a global-level spec");
  switch (spec.op) {
    case NoiseOp::Delete: return global_delete(g, roles, spec);
    case NoiseOp::Flip: return global_flip(g, roles, spec);
    case NoiseOp::Add: return global_add(g, roles, spec);
  }
  throw InputError("unknown noise operation");
}

}  // namespace graphnoise
