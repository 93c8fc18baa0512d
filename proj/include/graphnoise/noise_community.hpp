#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "graphnoise/community.hpp"
#include "graphnoise/graph.hpp"
#include "graphnoise/noise.hpp"

namespace graphnoise {

struct EdgeClasses {
  std::vector<Edge> intra;
  std::vector<Edge> inter;
};

/// Splits the edge set by the partition: intra edges join nodes of one
/// community, inter edges cross communities.
inline EdgeClasses classify_edges(const Graph& g, const Partition& p) {
  if (p.assignment.size() != static_cast<std::size_t>(g.node_count())) {
    throw InputError("partition does not cover the graph");
  }
  EdgeClasses classes;
  for (const Edge& e : g.edges()) {
    const bool same = p.assignment[static_cast<std::size_t>(e.u)] == p.assignment[static_cast<std::size_t>(e.v)];
    (same ? classes.intra : classes.inter).push_back(e);
  }
  return classes;
}

namespace detail {

inline std::vector<std::vector<NodeId>> members_by_class(const std::vector<NodeId>& labels, NodeId class_count) {
  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(class_count));
  for (std::size_t v = 0; v < labels.size(); ++v) {
    members[static_cast<std::size_t>(labels[v])].push_back(static_cast<NodeId>(v));
  }
  return members;
}

}  // namespace detail

/// Community flip: delete ceil(ratio * |intra|) sampled intra edges and
/// replace each inside the community it came from; independently delete
/// ceil(ratio * |inter|) inter edges and replace each with an edge joining
/// two (any two) different communities. Replacements may not exist in the
/// original graph; impossible replacements roll the paired deletion back,
/// so the edge count is preserved exactly.
inline std::pair<Graph, PerturbationReport> community_flip(const Graph& g, const Partition& p,
                                                           const NoiseSpec& spec) {
  spec.validate();
  const EdgeClasses classes = classify_edges(g, p);
  const auto members = detail::members_by_class(p.assignment, p.community_count);

  Rng rng(spec.seed);
  const auto intra_sample = rng.sample(classes.intra, scaled_count(classes.intra.size(), spec.ratio));
  const auto inter_sample = rng.sample(classes.inter, scaled_count(classes.inter.size(), spec.ratio));

  GraphEditor editor(g);
  PerturbationReport report;
  for (const Edge& e : intra_sample) editor.remove_edge(e.u, e.v);
  for (const Edge& e : inter_sample) editor.remove_edge(e.u, e.v);

  for (const Edge& e : intra_sample) {
    const NodeId community = p.assignment[static_cast<std::size_t>(e.u)];
    if (const auto pick =
            detail::sample_pair_within(members[static_cast<std::size_t>(community)], editor, g, rng)) {
      editor.add_edge(pick->u, pick->v);
      report.deleted.push_back(e);
      report.added.push_back(*pick);
    } else {
      editor.add_edge(e.u, e.v);  // roll back
      ++report.skipped_pairs;
    }
  }
  for (const Edge& e : inter_sample) {
    if (const auto pick = detail::sample_pair_across(p.assignment, editor, g, rng)) {
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

/// Deletes the sampled intra and inter edges with no replacements.
inline std::pair<Graph, PerturbationReport> community_delete(const Graph& g, const Partition& p,
                                                             const NoiseSpec& spec) {
  spec.validate();
  const EdgeClasses classes = classify_edges(g, p);
  Rng rng(spec.seed);
  const auto intra_sample = rng.sample(classes.intra, scaled_count(classes.intra.size(), spec.ratio));
  const auto inter_sample = rng.sample(classes.inter, scaled_count(classes.inter.size(), spec.ratio));

  GraphEditor editor(g);
  PerturbationReport report;
  for (const Edge& e : intra_sample) {
    editor.remove_edge(e.u, e.v);
    report.deleted.push_back(e);
  }
  for (const Edge& e : inter_sample) {
    editor.remove_edge(e.u, e.v);
    report.deleted.push_back(e);
  }
  return {std::move(editor).build(), std::move(report)};
}

/// Inserts new edges with the flip's endpoint-class constraints and no
/// deletions. Each attempted intra addition targets the community of a
/// uniformly sampled existing intra edge (sampled without replacement,
/// mirroring the flip's pairing); inter additions join any two different
/// communities.
inline std::pair<Graph, PerturbationReport> community_add(const Graph& g, const Partition& p,
                                                          const NoiseSpec& spec) {
  spec.validate();
  const EdgeClasses classes = classify_edges(g, p);
  const auto members = detail::members_by_class(p.assignment, p.community_count);

  Rng rng(spec.seed);
  const auto intra_anchors = rng.sample(classes.intra, scaled_count(classes.intra.size(), spec.ratio));
  const std::size_t inter_attempts = scaled_count(classes.inter.size(), spec.ratio);

  GraphEditor editor(g);
  PerturbationReport report;
  for (const Edge& anchor : intra_anchors) {
    const NodeId community = p.assignment[static_cast<std::size_t>(anchor.u)];
    if (const auto pick =
            detail::sample_pair_within(members[static_cast<std::size_t>(community)], editor, g, rng)) {
      editor.add_edge(pick->u, pick->v);
      report.added.push_back(*pick);
    } else {
      ++report.skipped_pairs;
    }
  }
  for (std::size_t i = 0; i < inter_attempts; ++i) {
    if (const auto pick = detail::sample_pair_across(p.assignment, editor, g, rng)) {
      editor.add_edge(pick->u, pick->v);
      report.added.push_back(*pick);
    } else {
      ++report.skipped_pairs;
    }
  }
  return {std::move(editor).build(), std::move(report)};
}

inline std::pair<Graph, PerturbationReport> apply_community_noise(const Graph& g, const Partition& p,
                                                                  const NoiseSpec& spec) {
  if (spec.level != NoiseLevel::Community) throw InputError("apply_community_noise requires a community-level spec");
  switch (spec.op) {
    case NoiseOp::Delete: return community_delete(g, p, spec);
    case NoiseOp::Flip: return community_flip(g, p, spec);
    case NoiseOp::Add: return community_add(g, p, spec);
  }
  throw InputError("unknown noise operation");
}

}  // namespace graphnoise
