#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "graphnoise/graph.hpp"
#include "graphnoise/noise.hpp"

namespace graphnoise {

/// Nodes ranked by (degree descending, id ascending); the first
/// ceil(ratio * node_count) of them are the perturbation targets.
inline std::vector<NodeId> select_targets(const Graph& g, double ratio) {
  std::vector<NodeId> order(static_cast<std::size_t>(g.node_count()));
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const NodeId da = g.degree(a), db = g.degree(b);
    return da != db ? da > db : a < b;
  });
  order.resize(scaled_count(order.size(), ratio));
  return order;
}

namespace detail {

inline NodeId local_threshold(const Graph& g, const NoiseSpec& spec) {
  return spec.threshold_override ? *spec.threshold_override : degree_mode(g);
}

}  // namespace detail

/// Trims every target back to the threshold by deleting uniformly random
/// incident edges. Targets whose degree was already lowered to the
/// threshold by earlier deletions are left alone.
inline std::pair<Graph, PerturbationReport> local_delete(const Graph& g, const NoiseSpec& spec) {
  spec.validate();
  const NodeId threshold = detail::local_threshold(g, spec);
  PerturbationReport report;
  report.threshold = threshold;
  report.targets = select_targets(g, spec.ratio);
  GraphEditor editor(g);
  Rng rng(spec.seed);
  for (NodeId v : report.targets) {
    while (editor.degree(v) > threshold) {
      const NodeId u = editor.neighbor_at(v, rng.index(static_cast<std::size_t>(editor.degree(v))));
      editor.remove_edge(v, u);
      report.deleted.push_back(make_edge(v, u));
    }
  }
  std::sort(report.deleted.begin(), report.deleted.end());
  return {std::move(editor).build(), std::move(report)};
}

/// Per-target flip budget: original degree minus threshold. Each flip
/// deletes a random currently-incident edge and rewires the endpoint to a
/// node adjacent in neither the current nor the original graph; when no
/// such node exists the deletion is rolled back and the pair counted as
/// skipped, so the edge count is preserved exactly.
inline std::pair<Graph, PerturbationReport> local_flip(const Graph& g, const NoiseSpec& spec) {
  spec.validate();
  const NodeId threshold = detail::local_threshold(g, spec);
  PerturbationReport report;
  report.threshold = threshold;
  report.targets = select_targets(g, spec.ratio);
  GraphEditor editor(g);
  Rng rng(spec.seed);
  detail::EdgeDeltaLog log;
  for (NodeId v : report.targets) {
    const NodeId budget = std::max<NodeId>(0, g.degree(v) - threshold);
    for (NodeId i = 0; i < budget; ++i) {
      if (editor.degree(v) == 0) {
        ++report.skipped_pairs;
        continue;
      }
      const NodeId dropped = editor.neighbor_at(v, rng.index(static_cast<std::size_t>(editor.degree(v))));
      editor.remove_edge(v, dropped);
      if (const auto pick = sample_replacement_endpoint(editor, g, v, rng)) {
        editor.add_edge(v, *pick);
        log.record_removed(make_edge(v, dropped));
        log.record_added(make_edge(v, *pick));
      } else {
        editor.add_edge(v, dropped);  // roll the deletion back
        ++report.skipped_pairs;
      }
    }
  }
  report.deleted = log.deleted();
  report.added = log.added();
  return {std::move(editor).build(), std::move(report)};
}

/// Adds the same per-target budget of new edges instead of rewiring;
/// unobtainable additions are counted as skipped.
inline std::pair<Graph, PerturbationReport> local_add(const Graph& g, const NoiseSpec& spec) {
  spec.validate();
  const NodeId threshold = detail::local_threshold(g, spec);
  PerturbationReport report;
  report.threshold = threshold;
  report.targets = select_targets(g, spec.ratio);
  GraphEditor editor(g);
  Rng rng(spec.seed);
  for (NodeId v : report.targets) {
    const NodeId budget = std::max<NodeId>(0, g.degree(v) - threshold);
    for (NodeId i = 0; i < budget; ++i) {
      if (const auto pick = sample_replacement_endpoint(editor, g, v, rng)) {
        editor.add_edge(v, *pick);
        report.added.push_back(make_edge(v, *pick));
      } else {
        ++report.skipped_pairs;
      }
    }
  }
  std::sort(report.added.begin(), report.added.end());
  return {std::move(editor).build(), std::move(report)};
}

inline std::pair<Graph, PerturbationReport> apply_local_noise(const Graph& g, const NoiseSpec& spec) {
  if (spec.level != NoiseLevel::Local) throw InputError("apply_local_noise requires a local-level spec");
  switch (spec.op) {
    case NoiseOp::Delete: return local_delete(g, spec);
    case NoiseOp::Flip: return local_flip(g, spec);
    case NoiseOp::Add: return local_add(g, spec);
  }
  throw InputError("unknown noise operation");
}

}  // namespace graphnoise
