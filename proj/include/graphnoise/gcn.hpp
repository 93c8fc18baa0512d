#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "graphnoise/dataset.hpp"
#include "graphnoise/error.hpp"
#include "graphnoise/graph.hpp"
#include "graphnoise/noise.hpp"
#include "graphnoise/rng.hpp"

namespace graphnoise {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct GcnHyper {
  int hidden = 16;
  double learning_rate = 0.01;
  double weight_decay = 5e-4;  // L2 on the first layer
  double dropout = 0.5;
  int epochs = 200;
  int patience = 10;
  double drop_edge_keep = 0.8;

  void validate() const {
    if (hidden < 1) throw InputError("hidden width must be positive");
    if (!(learning_rate > 0.0)) throw InputError("learning_rate must be positive");
    if (weight_decay < 0.0) throw InputError("weight_decay must be nonnegative");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw InputError("dropout must lie in [0, 1)");
    if (epochs < 1) throw InputError("epochs must be positive");
    if (patience < 1) throw InputError("patience must be positive");
    if (!(drop_edge_keep > 0.0 && drop_edge_keep <= 1.0)) throw InputError("drop_edge_keep must lie in (0, 1]");
  }
};

enum class GcnVariant { Plain, DropEdge };

inline std::optional<GcnVariant> parse_model_name(std::string_view name) noexcept {
  if (name == "gcn") return GcnVariant::Plain;
  if (name == "gcn-dropedge") return GcnVariant::DropEdge;
  return std::nullopt;
}

constexpr std::string_view to_string(GcnVariant variant) noexcept {
  return variant == GcnVariant::Plain ? "gcn" : "gcn-dropedge";
}

/// Two-layer graph convolutional classifier.
struct GcnModel {
  Eigen::MatrixXd w1;  // feature_dim x hidden
  Eigen::MatrixXd w2;  // hidden x num_classes
  GcnHyper hyper;
};

/// Symmetrically normalized adjacency with self-loops built from an
/// explicit edge set: entry (u, v) = 1 / sqrt((d_u + 1)(d_v + 1)).
inline SparseMatrix normalize_adjacency(NodeId node_count, const std::vector<Edge>& edges) {
  std::vector<double> degree(static_cast<std::size_t>(node_count), 0.0);
  for (const Edge& e : edges) {
    degree[static_cast<std::size_t>(e.u)] += 1.0;
    degree[static_cast<std::size_t>(e.v)] += 1.0;
  }
  std::vector<double> inv_sqrt(static_cast<std::size_t>(node_count));
  for (std::size_t v = 0; v < inv_sqrt.size(); ++v) inv_sqrt[v] = 1.0 / std::sqrt(degree[v] + 1.0);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edges.size() * 2 + static_cast<std::size_t>(node_count));
  for (NodeId v = 0; v < node_count; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    triplets.emplace_back(v, v, inv_sqrt[vi] * inv_sqrt[vi]);
  }
  for (const Edge& e : edges) {
    const double w = inv_sqrt[static_cast<std::size_t>(e.u)] * inv_sqrt[static_cast<std::size_t>(e.v)];
    triplets.emplace_back(e.u, e.v, w);
    triplets.emplace_back(e.v, e.u, w);
  }
  SparseMatrix a_hat(node_count, node_count);
  a_hat.setFromTriplets(triplets.begin(), triplets.end());
  return a_hat;
}

inline SparseMatrix normalize_adjacency(const Graph& g) { return normalize_adjacency(g.node_count(), g.edges()); }

/// Rows scaled to sum to 1 (zero rows left untouched); the usual feature
/// preprocessing for citation networks.
inline SparseMatrix row_normalize(const SparseMatrix& features) {
  std::vector<double> row_sum(static_cast<std::size_t>(features.rows()), 0.0);
  for (int k = 0; k < features.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(features, k); it; ++it) {
      row_sum[static_cast<std::size_t>(it.row())] += it.value();
    }
  }
  SparseMatrix scaled = features;
  for (int k = 0; k < scaled.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(scaled, k); it; ++it) {
      const double s = row_sum[static_cast<std::size_t>(it.row())];
      if (s > 0.0) it.valueRef() /= s;
    }
  }
  return scaled;
}

/// Glorot-uniform initialization, seeded.
inline GcnModel init_gcn_model(int feature_dim, int num_classes, const GcnHyper& hyper, std::uint64_t seed) {
  hyper.validate();
  if (feature_dim < 1 || num_classes < 1) throw InputError("model dimensions must be positive");
  GcnModel model;
  model.hyper = hyper;
  Rng rng(stable_mix({seed, fnv1a64("gcn-init")}));
  auto fill = [&rng](Eigen::MatrixXd& w, int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    w.resize(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = (2.0 * rng.unit() - 1.0) * limit;
    }
  };
  fill(model.w1, feature_dim, hyper.hidden);
  fill(model.w2, hyper.hidden, num_classes);
  return model;
}

/// Forward pass without dropout: A * relu(A * X * W1) * W2.
inline Eigen::MatrixXd gcn_logits(const GcnModel& model, const SparseMatrix& a_hat, const SparseMatrix& features) {
  const Eigen::MatrixXd hidden = (a_hat * (features * model.w1)).cwiseMax(0.0);
  return a_hat * (hidden * model.w2);
}

/// Row-wise softmax with the usual max-shift for stability.
inline Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p = logits;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double m = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

/// Fraction of nodes whose argmax logit matches the label. Argmax ties go
/// to the lowest class index.
inline double accuracy_on(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                          const std::vector<NodeId>& nodes) {
  if (nodes.empty()) return 0.0;
  std::size_t correct = 0;
  for (NodeId v : nodes) {
    int best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c) {
      if (logits(v, c) > logits(v, best)) best = static_cast<int>(c);
    }
    if (best == labels[static_cast<std::size_t>(v)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

struct GcnGradients {
  Eigen::MatrixXd w1;
  Eigen::MatrixXd w2;
};

/// Mean softmax cross-entropy over `train_nodes` plus 0.5 * weight_decay *
/// ||W1||^2. When `dropout_mask` is given it multiplies the hidden
/// activations (inverted-dropout scaling is the caller's concern). Fills
/// analytic gradients when `grads` is non-null.
inline double gcn_loss_and_gradients(const GcnModel& model, const SparseMatrix& a_hat,
                                     const SparseMatrix& features, const std::vector<int>& labels,
                                     const std::vector<NodeId>& train_nodes,
                                     const Eigen::MatrixXd* dropout_mask, GcnGradients* grads) {
  if (train_nodes.empty()) throw InputError("training split is empty");
  const Eigen::MatrixXd pre_hidden = a_hat * (features * model.w1);
  const Eigen::MatrixXd hidden = pre_hidden.cwiseMax(0.0);
  const Eigen::MatrixXd hidden_kept = dropout_mask ? hidden.cwiseProduct(*dropout_mask) : hidden;
  const Eigen::MatrixXd logits = a_hat * (hidden_kept * model.w2);
  const Eigen::MatrixXd probs = softmax_rows(logits);

  const double inv_count = 1.0 / static_cast<double>(train_nodes.size());
  double loss = 0.0;
  for (NodeId v : train_nodes) {
    const double p = std::max(probs(v, labels[static_cast<std::size_t>(v)]), 1e-300);
    loss -= std::log(p) * inv_count;
  }
  loss += 0.5 * model.hyper.weight_decay * model.w1.squaredNorm();

  if (grads != nullptr) {
    Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
    for (NodeId v : train_nodes) {
      d_logits.row(v) = probs.row(v) * inv_count;
      d_logits(v, labels[static_cast<std::size_t>(v)]) -= inv_count;
    }
    const Eigen::MatrixXd d_combined = a_hat * d_logits;  // a_hat is symmetric
    grads->w2 = hidden_kept.transpose() * d_combined;
    Eigen::MatrixXd d_hidden = d_combined * model.w2.transpose();
    if (dropout_mask) d_hidden = d_hidden.cwiseProduct(*dropout_mask);
    const Eigen::MatrixXd d_pre = ((pre_hidden.array() > 0.0).cast<double>() * d_hidden.array()).matrix();
    grads->w1 = features.transpose() * (a_hat * d_pre).eval();
    grads->w1 += model.hyper.weight_decay * model.w1;
  }
  return loss;
}

struct TrainOutcome {
  GcnModel model;
  double test_accuracy = 0.0;
  double best_validation_accuracy = 0.0;
  int epochs_run = 0;
};

/// Trains the two-layer GCN with Adam, inverted dropout on the hidden
/// activations and early stopping on validation accuracy; returns the model
/// snapshot with the best validation accuracy. The DropEdge variant rebuilds
/// the normalized adjacency each epoch from a uniformly subsampled edge set
/// of ceil(keep * |edges|) edges; validation and test always use the full
/// graph.
inline TrainOutcome train_gcn(const Dataset& ds, const Graph& g, const GcnHyper& hyper, std::uint64_t seed,
                              GcnVariant variant = GcnVariant::Plain) {
  hyper.validate();
  if (g.node_count() != ds.graph.node_count()) {
    throw InputError("graph is not node-compatible with the dataset");
  }

  const SparseMatrix features = row_normalize(ds.features);
  const SparseMatrix a_full = normalize_adjacency(g);
  const std::vector<Edge> edges = g.edges();
  const auto n = static_cast<Eigen::Index>(g.node_count());

  GcnModel model = init_gcn_model(ds.feature_dim, ds.num_classes, hyper, seed);
  Rng rng(stable_mix({seed, fnv1a64("gcn-train")}));

  // Adam state
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols());
  Eigen::MatrixXd v1 = m1, m2 = Eigen::MatrixXd::Zero(model.w2.rows(), model.w2.cols()), v2 = m2;

  GcnModel best_model = model;
  double best_validation = -1.0;
  int epochs_without_improvement = 0;
  int epochs_run = 0;

  const double keep_prob = 1.0 - hyper.dropout;
  GcnGradients grads;
  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    epochs_run = epoch;

    SparseMatrix a_epoch;
    const SparseMatrix* a_train = &a_full;
    if (variant == GcnVariant::DropEdge && hyper.drop_edge_keep < 1.0 && !edges.empty()) {
      const auto kept = rng.sample(edges, scaled_count(edges.size(), hyper.drop_edge_keep));
      a_epoch = normalize_adjacency(g.node_count(), kept);
      a_train = &a_epoch;
    }

    Eigen::MatrixXd mask;
    const Eigen::MatrixXd* mask_ptr = nullptr;
    if (hyper.dropout > 0.0) {
      mask.resize(n, hyper.hidden);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < hyper.hidden; ++j) {
          mask(i, j) = rng.unit() < keep_prob ? 1.0 / keep_prob : 0.0;
        }
      }
      mask_ptr = &mask;
    }

    const double loss =
        gcn_loss_and_gradients(model, *a_train, features, ds.labels, ds.split.train, mask_ptr, &grads);
    if (!std::isfinite(loss)) throw DivergenceError("training loss became non-finite", epoch);

    const double bias1 = 1.0 - std::pow(beta1, epoch);
    const double bias2 = 1.0 - std::pow(beta2, epoch);
    auto adam_step = [&](Eigen::MatrixXd& w, Eigen::MatrixXd& m, Eigen::MatrixXd& v, const Eigen::MatrixXd& grad) {
      m = beta1 * m + (1.0 - beta1) * grad;
      v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
      const Eigen::ArrayXXd m_hat = m.array() / bias1;
      const Eigen::ArrayXXd v_hat = v.array() / bias2;
      w.array() -= hyper.learning_rate * m_hat / (v_hat.sqrt() + adam_eps);
    };
    adam_step(model.w1, m1, v1, grads.w1);
    adam_step(model.w2, m2, v2, grads.w2);

    const Eigen::MatrixXd logits = gcn_logits(model, a_full, features);
    const double validation = accuracy_on(logits, ds.labels, ds.split.validation);
    if (validation > best_validation) {
      best_validation = validation;
      best_model = model;
      epochs_without_improvement = 0;
    } else {
      ++epochs_without_improvement;
      if (epochs_without_improvement >= hyper.patience) break;
    }
  }

  TrainOutcome outcome;
  outcome.model = std::move(best_model);
  outcome.best_validation_accuracy = best_validation;
  outcome.epochs_run = epochs_run;
  const Eigen::MatrixXd logits = gcn_logits(outcome.model, a_full, features);
  outcome.test_accuracy = accuracy_on(logits, ds.labels, ds.split.test);
  return outcome;
}

/// Deterministic accuracy of a model on one split part (no dropout at
/// evaluation).
inline double evaluate(const GcnModel& model, const Dataset& ds, const Graph& g,
                       const std::vector<NodeId>& nodes) {
  const SparseMatrix features = row_normalize(ds.features);
  const SparseMatrix a_hat = normalize_adjacency(g);
  return accuracy_on(gcn_logits(model, a_hat, features), ds.labels, nodes);
}

}  // namespace graphnoise
