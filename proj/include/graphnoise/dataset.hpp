#pragma once

#include <Eigen/Sparse>
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "graphnoise/error.hpp"
#include "graphnoise/graph.hpp"
#include "graphnoise/hash.hpp"
#include "graphnoise/noise.hpp"

namespace graphnoise {

/// Shortest decimal text that parses back to exactly the same double.
/// Locale-independent; used everywhere floats are serialized.
inline std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

inline std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

inline std::optional<std::int64_t> parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view text) {
  std::uint64_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

/// Disjoint train/validation/test node sets.
struct DataSplit {
  std::vector<NodeId> train;
  std::vector<NodeId> validation;
  std::vector<NodeId> test;
};

/// Fixed-protocol split sizes: per-class train count plus flat validation
/// and test counts.
struct SplitPolicy {
  int per_class_train = 20;
  int validation = 500;
  int test = 1000;
};

struct DatasetLoadReport {
  std::size_t citation_rows = 0;       // rows in the citation file
  std::size_t dropped_unknown = 0;     // rows naming an id absent from the content file
  std::size_t self_loop_rows = 0;      // rows citing the node itself
  std::size_t duplicate_pairs = 0;     // repeated pairs, in either order
};

/// A citation-network dataset: graph, node features, labels and the fixed
/// split. Node ids are dense integers assigned by lexicographic order of
/// the string ids in the content file; class ids likewise by lexicographic
/// label order.
struct Dataset {
  std::string name;
  Graph graph;
  Eigen::SparseMatrix<double> features;  // node_count x feature_dim
  int feature_dim = 0;
  std::vector<int> labels;
  int num_classes = 0;
  DataSplit split;
  DatasetLoadReport report;
};

namespace detail {

inline std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> tokens;
  std::string cleaned = line;
  std::replace(cleaned.begin(), cleaned.end(), '\r', ' ');  // tolerate CRLF files
  std::istringstream stream(cleaned);
  std::string token;
  while (stream >> token) tokens.push_back(std::move(token));
  return tokens;
}

/// Yang-et-al.-style fixed split, derived deterministically from node ids:
/// the test block is the last `test` ids, training takes the first
/// `per_class_train` non-test nodes of every class in ascending id order,
/// and validation the first `validation` remaining ids.
inline DataSplit derive_split(const std::vector<int>& labels, int num_classes, const SplitPolicy& policy) {
  const auto n = static_cast<NodeId>(labels.size());
  if (policy.per_class_train < 0 || policy.validation < 0 || policy.test < 0) {
    throw InputError("split policy sizes must be nonnegative");
  }
  if (static_cast<std::size_t>(policy.test) > labels.size()) {
    throw InputError("dataset smaller than the requested test split");
  }
  DataSplit split;
  const NodeId test_begin = n - static_cast<NodeId>(policy.test);
  for (NodeId v = test_begin; v < n; ++v) split.test.push_back(v);

  std::vector<int> taken(static_cast<std::size_t>(num_classes), 0);
  std::vector<char> in_train(labels.size(), 0);
  for (NodeId v = 0; v < test_begin; ++v) {
    const int label = labels[static_cast<std::size_t>(v)];
    if (taken[static_cast<std::size_t>(label)] < policy.per_class_train) {
      ++taken[static_cast<std::size_t>(label)];
      in_train[static_cast<std::size_t>(v)] = 1;
      split.train.push_back(v);
    }
  }
  for (int c = 0; c < num_classes; ++c) {
    if (taken[static_cast<std::size_t>(c)] < policy.per_class_train) {
      throw InputError("class " + std::to_string(c) + " has too few nodes for the training split");
    }
  }
  for (NodeId v = 0; v < test_begin && split.validation.size() < static_cast<std::size_t>(policy.validation); ++v) {
    if (!in_train[static_cast<std::size_t>(v)]) split.validation.push_back(v);
  }
  if (split.validation.size() < static_cast<std::size_t>(policy.validation)) {
    throw InputError("dataset smaller than the requested validation split");
  }
  return split;
}

inline std::filesystem::path resolve_dataset_file(const std::filesystem::path& dir, const std::string& name,
                                                  const char* extension) {
  const auto flat = dir / (name + extension);
  if (std::filesystem::exists(flat)) return flat;
  const auto nested = dir / name / (name + extension);
  if (std::filesystem::exists(nested)) return nested;
  throw IoError("dataset file not found: tried " + flat.string() + " and " + nested.string());
}

}  // namespace detail

/// Loads a dataset stored as a content file (one row per node:
/// "id attr_1 ... attr_d label") and a citation file ("id id" per row),
/// either flat in `dir` or under `dir/name/`. Citation rows naming unknown
/// ids are dropped and counted; duplicate pairs collapse with a count.
inline Dataset load_dataset(const std::filesystem::path& dir, const std::string& name,
                            const SplitPolicy& policy = {}) {
  const auto content_path = detail::resolve_dataset_file(dir, name, ".content");
  const auto cites_path = detail::resolve_dataset_file(dir, name, ".cites");

  std::ifstream content(content_path);
  if (!content) throw IoError("cannot open " + content_path.string());

  struct Row {
    std::vector<std::pair<int, double>> attrs;  // nonzero attributes only
    std::string label;
  };
  std::map<std::string, Row> rows;  // ordered: lexicographic id -> dense index
  int feature_dim = -1;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(content, line)) {
    ++line_number;
    const auto tokens = detail::split_whitespace(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 3) throw ParseError("content row needs an id, attributes and a label", line_number);
    const int dim = static_cast<int>(tokens.size()) - 2;
    if (feature_dim < 0) {
      feature_dim = dim;
    } else if (dim != feature_dim) {
      throw ParseError("content row has " + std::to_string(dim) + " attributes, expected " +
                           std::to_string(feature_dim),
                       line_number);
    }
    Row row;
    for (int j = 0; j < dim; ++j) {
      const auto value = parse_double(tokens[static_cast<std::size_t>(j) + 1]);
      if (!value) throw ParseError("attribute '" + tokens[static_cast<std::size_t>(j) + 1] + "' is not a number",
                                   line_number);
      if (*value < 0.0) throw ParseError("attributes must be nonnegative", line_number);
      if (*value != 0.0) row.attrs.emplace_back(j, *value);
    }
    row.label = tokens.back();
    if (!rows.emplace(tokens.front(), std::move(row)).second) {
      throw ParseError("duplicate node id '" + tokens.front() + "'", line_number);
    }
  }
  if (rows.empty()) throw InputError("content file " + content_path.string() + " has no rows");

  Dataset ds;
  ds.name = name;
  ds.feature_dim = feature_dim;

  std::map<std::string, NodeId> id_of;
  {
    NodeId next = 0;
    for (const auto& [id, row] : rows) id_of.emplace(id, next++);
  }
  std::map<std::string, int> class_of;
  for (const auto& [id, row] : rows) class_of.emplace(row.label, 0);
  {
    int next = 0;
    for (auto& [label, cls] : class_of) cls = next++;
  }
  ds.num_classes = static_cast<int>(class_of.size());

  const auto n = static_cast<NodeId>(rows.size());
  ds.labels.resize(static_cast<std::size_t>(n));
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& [id, row] : rows) {
    const NodeId v = id_of.at(id);
    ds.labels[static_cast<std::size_t>(v)] = class_of.at(row.label);
    for (const auto& [j, value] : row.attrs) triplets.emplace_back(v, j, value);
  }
  ds.features.resize(n, feature_dim);
  ds.features.setFromTriplets(triplets.begin(), triplets.end());

  std::ifstream cites(cites_path);
  if (!cites) throw IoError("cannot open " + cites_path.string());
  std::vector<std::pair<NodeId, NodeId>> pairs;
  line_number = 0;
  while (std::getline(cites, line)) {
    ++line_number;
    const auto tokens = detail::split_whitespace(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError("citation row needs exactly two ids", line_number);
    ++ds.report.citation_rows;
    const auto a = id_of.find(tokens[0]);
    const auto b = id_of.find(tokens[1]);
    if (a == id_of.end() || b == id_of.end()) {
      ++ds.report.dropped_unknown;
      continue;
    }
    if (a->second == b->second) {
      ++ds.report.self_loop_rows;
      continue;
    }
    pairs.emplace_back(a->second, b->second);
  }

  auto built = from_edge_list(pairs, n);
  ds.graph = std::move(built.graph);
  ds.report.duplicate_pairs = built.duplicates_collapsed;
  ds.split = detail::derive_split(ds.labels, ds.num_classes, policy);
  return ds;
}

/// Writes "u v\n" per edge with u < v, rows ascending; returns the FNV-1a
/// hash of the file contents as 16 hex characters. Two writes of the same
/// graph produce identical bytes.
inline std::string write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  Fnv1a hash;
  for (const Edge& e : g.edges()) {
    std::string row = std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    hash.update(row);
    out << row;
  }
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
  return hash.hex();
}

/// Content hash of an existing edge-list file (same digest write_edge_list
/// would have returned).
inline std::optional<std::string> hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  Fnv1a hash;
  char buffer[1 << 14];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    hash.update(buffer, static_cast<std::size_t>(in.gcount()));
    if (!in) break;
  }
  return hash.hex();
}

/// Reads an edge list written by write_edge_list.
inline GraphBuildResult read_edge_list(const std::filesystem::path& path, NodeId node_count) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto tokens = detail::split_whitespace(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError("edge row needs exactly two ids", line_number);
    const auto a = parse_int(tokens[0]);
    const auto b = parse_int(tokens[1]);
    if (!a || !b) throw ParseError("edge endpoints must be integers", line_number);
    pairs.emplace_back(static_cast<NodeId>(*a), static_cast<NodeId>(*b));
  }
  return from_edge_list(pairs, node_count);
}

/// Key=value manifest describing one perturbation, with a stable field
/// order so identical runs produce identical bytes.
inline void write_manifest(const NoiseSpec& spec, const PerturbationReport& report,
                           const std::string& graph_checksum, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "level=" << to_string(spec.level) << "\n";
  out << "op=" << to_string(spec.op) << "\n";
  out << "ratio=" << format_double(spec.ratio) << "\n";
  out << "seed=" << spec.seed << "\n";
  if (spec.threshold_override) out << "threshold_override=" << *spec.threshold_override << "\n";
  if (spec.community_resolution) out << "community_resolution=" << format_double(*spec.community_resolution) << "\n";
  if (spec.role_count) out << "role_count=" << *spec.role_count << "\n";
  if (report.threshold) out << "threshold=" << *report.threshold << "\n";
  out << "deleted_count=" << report.deleted.size() << "\n";
  out << "added_count=" << report.added.size() << "\n";
  out << "skipped_pairs=" << report.skipped_pairs << "\n";
  out << "checksum=" << graph_checksum << "\n";
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace graphnoise
