#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "graphnoise/community.hpp"
#include "graphnoise/dataset.hpp"
#include "graphnoise/error.hpp"
#include "graphnoise/gcn.hpp"
#include "graphnoise/graph.hpp"
#include "graphnoise/hash.hpp"
#include "graphnoise/noise.hpp"
#include "graphnoise/noise_community.hpp"
#include "graphnoise/noise_global.hpp"
#include "graphnoise/noise_local.hpp"
#include "graphnoise/roles.hpp"

namespace graphnoise {

/// Default ratio grid: 0.05 to 0.8 in steps of 0.05.
inline std::vector<double> default_ratio_grid() {
  std::vector<double> ratios;
  for (int i = 1; i <= 16; ++i) ratios.push_back(static_cast<double>(i) / 20.0);
  return ratios;
}

/// Stable per-cell seed from the cell coordinates; independent of execution
/// order so cells can run in parallel and sweeps can resume.
inline std::uint64_t cell_seed(std::uint64_t base_seed, NoiseLevel level, NoiseOp op, std::size_t ratio_index,
                               int repetition) {
  return stable_mix({base_seed, static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(op), ratio_index,
                     static_cast<std::uint64_t>(repetition)});
}

/// Seed for the sweep-wide role model (computed once per dataset).
inline std::uint64_t role_model_seed(std::uint64_t base_seed) {
  return stable_mix({base_seed, fnv1a64("role-model")});
}

struct SweepConfig {
  std::vector<std::string> datasets;
  std::filesystem::path data_dir = "data";
  std::vector<NoiseLevel> levels = {NoiseLevel::Local, NoiseLevel::Community, NoiseLevel::Global};
  std::vector<NoiseOp> ops = {NoiseOp::Delete, NoiseOp::Flip, NoiseOp::Add};
  std::vector<double> ratios = default_ratio_grid();
  int repetitions = 6;
  std::vector<std::string> models = {"gcn"};
  std::uint64_t base_seed = 0;
  bool write_graphs = false;
  int role_count = kDefaultRoleCount;
  int refex_depth = 2;
  std::optional<double> community_resolution;
  GcnHyper hyper;

  void validate() const {
    if (datasets.empty()) throw ConfigError("config needs at least one dataset");
    if (levels.empty() || ops.empty() || ratios.empty()) throw ConfigError("levels, ops and ratios must be nonempty");
    for (double r : ratios) {
      if (!(r > 0.0 && r <= 1.0)) throw ConfigError("ratio " + format_double(r) + " outside (0, 1]");
    }
    if (repetitions < 1) throw ConfigError("repetitions must be positive");
    if (models.empty()) throw ConfigError("config needs at least one model");
    for (const auto& m : models) {
      if (!parse_model_name(m)) throw ConfigError("unknown model '" + m + "'");
    }
    if (role_count < 2) throw ConfigError("role_count must be at least 2");
    if (refex_depth < 0) throw ConfigError("refex_depth must be nonnegative");
    try {
      hyper.validate();
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = item.find_last_not_of(" \t");
    parts.push_back(item.substr(begin, end - begin + 1));
  }
  return parts;
}

inline std::string trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return std::string(text.substr(begin, end - begin + 1));
}

}  // namespace detail

/// Parses a line-oriented key=value sweep configuration. '#' starts a
/// comment; unknown keys are configuration errors.
inline SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig config;
  std::string line;
  std::size_t line_number = 0;
  auto fail = [&](const std::string& message) {
    throw ConfigError(message + " (line " + std::to_string(line_number) + ")");
  };
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) fail("expected key=value");
    const std::string key = detail::trim(trimmed.substr(0, eq));
    const std::string value = detail::trim(trimmed.substr(eq + 1));
    if (value.empty()) fail("empty value for '" + key + "'");

    auto parse_positive_int = [&](const std::string& v) {
      const auto parsed = parse_int(v);
      if (!parsed || *parsed < 0) fail("'" + v + "' is not a nonnegative integer");
      return static_cast<int>(*parsed);
    };
    auto parse_real = [&](const std::string& v) {
      const auto parsed = parse_double(v);
      if (!parsed) fail("'" + v + "' is not a number");
      return *parsed;
    };

    if (key == "datasets") {
      config.datasets = detail::split_list(value);
    } else if (key == "data_dir") {
      config.data_dir = value;
    } else if (key == "levels") {
      config.levels.clear();
      for (const auto& item : detail::split_list(value)) {
        const auto level = parse_noise_level(item);
        if (!level) fail("unknown level '" + item + "'");
        config.levels.push_back(*level);
      }
    } else if (key == "ops") {
      config.ops.clear();
      for (const auto& item : detail::split_list(value)) {
        const auto op = parse_noise_op(item);
        if (!op) fail("unknown op '" + item + "'");
        config.ops.push_back(*op);
      }
    } else if (key == "ratios") {
      if (value == "default") {
        config.ratios = default_ratio_grid();
      } else {
        config.ratios.clear();
        for (const auto& item : detail::split_list(value)) config.ratios.push_back(parse_real(item));
      }
    } else if (key == "repetitions") {
      config.repetitions = parse_positive_int(value);
    } else if (key == "models") {
      config.models = detail::split_list(value);
    } else if (key == "base_seed") {
      const auto parsed = parse_int(value);
      if (!parsed || *parsed < 0) fail("base_seed must be a nonnegative integer");
      config.base_seed = static_cast<std::uint64_t>(*parsed);
    } else if (key == "write_graphs") {
      if (value == "true") {
        config.write_graphs = true;
      } else if (value == "false") {
        config.write_graphs = false;
      } else {
        fail("write_graphs must be true or false");
      }
    } else if (key == "role_count") {
      config.role_count = parse_positive_int(value);
    } else if (key == "refex_depth") {
      config.refex_depth = parse_positive_int(value);
    } else if (key == "community_resolution") {
      config.community_resolution = parse_real(value);
    } else if (key == "hidden") {
      config.hyper.hidden = parse_positive_int(value);
    } else if (key == "learning_rate") {
      config.hyper.learning_rate = parse_real(value);
    } else if (key == "weight_decay") {
      config.hyper.weight_decay = parse_real(value);
    } else if (key == "dropout") {
      config.hyper.dropout = parse_real(value);
    } else if (key == "epochs") {
      config.hyper.epochs = parse_positive_int(value);
    } else if (key == "patience") {
      config.hyper.patience = parse_positive_int(value);
    } else if (key == "drop_edge_keep") {
      config.hyper.drop_edge_keep = parse_real(value);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

inline SweepConfig parse_sweep_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_sweep_config(in);
}

/// One sweep cell's outcome.
struct ExperimentRecord {
  std::string dataset;
  std::string model;
  NoiseLevel level = NoiseLevel::Local;
  NoiseOp op = NoiseOp::Flip;
  double ratio = 0.0;
  int repetition = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  std::int64_t wall_time_ms = 0;
};

inline constexpr std::string_view kResultsHeader =
    "dataset,model,level,op,ratio,repetition,seed,accuracy,wall_time_ms";

/// Writes records in canonical (dataset, model, level, op, ratio,
/// repetition) order; identical record sets produce identical bytes.
inline void emit_results(std::vector<ExperimentRecord> records, const std::filesystem::path& path) {
  std::sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.dataset, a.model, a.level, a.op, a.ratio, a.repetition) <
           std::tie(b.dataset, b.model, b.level, b.op, b.ratio, b.repetition);
  });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kResultsHeader << "\n";
  for (const auto& r : records) {
    out << r.dataset << ',' << r.model << ',' << to_string(r.level) << ',' << to_string(r.op) << ','
        << format_double(r.ratio) << ',' << r.repetition << ',' << r.seed << ',' << format_double(r.accuracy) << ','
        << r.wall_time_ms << "\n";
  }
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

/// Reads a results file back; unparseable files yield an empty journal.
inline std::vector<ExperimentRecord> read_results(const std::filesystem::path& path) {
  std::vector<ExperimentRecord> records;
  std::ifstream in(path);
  if (!in) return records;
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kResultsHeader) return records;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (fields.size() != 9) return {};
    ExperimentRecord r;
    r.dataset = fields[0];
    r.model = fields[1];
    const auto level = parse_noise_level(fields[2]);
    const auto op = parse_noise_op(fields[3]);
    const auto ratio = parse_double(fields[4]);
    const auto repetition = parse_int(fields[5]);
    const auto seed = parse_uint(fields[6]);
    const auto accuracy = parse_double(fields[7]);
    const auto wall = parse_int(fields[8]);
    if (!level || !op || !ratio || !repetition || !seed || !accuracy || !wall) return {};
    r.level = *level;
    r.op = *op;
    r.ratio = *ratio;
    r.repetition = static_cast<int>(*repetition);
    r.seed = *seed;
    r.accuracy = *accuracy;
    r.wall_time_ms = *wall;
    records.push_back(std::move(r));
  }
  return records;
}

struct PerturbOutcome {
  Graph graph;
  PerturbationReport report;
};

/// Level dispatch on the clean graph. Community noise derives its partition
/// from the spec seed; global noise needs the sweep-wide role assignment.
inline PerturbOutcome perturb_graph(const Graph& g, const NoiseSpec& spec,
                                    const std::vector<int>* role_assignment = nullptr) {
  spec.validate();
  switch (spec.level) {
    case NoiseLevel::Local: {
      auto [graph, report] = apply_local_noise(g, spec);
      return {std::move(graph), std::move(report)};
    }
    case NoiseLevel::Community: {
      const Partition partition = louvain(g, spec.seed, spec.effective_resolution());
      auto [graph, report] = apply_community_noise(g, partition, spec);
      return {std::move(graph), std::move(report)};
    }
    case NoiseLevel::Global: {
      if (role_assignment == nullptr) throw InputError("global noise needs a role assignment");
      auto [graph, report] = apply_global_noise(g, *role_assignment, spec);
      return {std::move(graph), std::move(report)};
    }
  }
  throw InputError("unknown noise level");
}

namespace detail {

inline std::string record_key(const std::string& dataset, const std::string& model, NoiseLevel level, NoiseOp op,
                              double ratio, int repetition) {
  std::string key(dataset);
  key += '|';
  key += model;
  key += '|';
  key += to_string(level);
  key += '|';
  key += to_string(op);
  key += '|';
  key += format_double(ratio);
  key += '|';
  key += std::to_string(repetition);
  return key;
}

inline std::string graph_file_stem(const std::string& dataset, NoiseLevel level, NoiseOp op, double ratio,
                                   int repetition) {
  std::string stem(dataset);
  stem += '_';
  stem += to_string(level);
  stem += '_';
  stem += to_string(op);
  stem += "_r";
  stem += format_double(ratio);
  stem += "_rep";
  stem += std::to_string(repetition);
  return stem;
}

/// A previously written perturbed graph counts as done only when the
/// manifest's recorded checksum matches the edge file's actual contents.
inline bool graph_files_valid(const std::filesystem::path& edge_path, const std::filesystem::path& manifest_path) {
  const auto actual = hash_file(edge_path);
  if (!actual) return false;
  std::ifstream manifest(manifest_path);
  if (!manifest) return false;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.rfind("checksum=", 0) == 0) return line.substr(9) == *actual;
  }
  return false;
}

}  // namespace detail

/// Runs every (level, op, ratio, repetition, model) cell of the sweep on
/// each dataset. Noise is always applied to the clean graph. Cells whose
/// records already exist in <out_dir>/results.csv are not recomputed, so a
/// finished sweep re-emits byte-identical results. With `jobs` > 1 the
/// independent cells run on a worker pool; output is canonical either way.
inline std::vector<ExperimentRecord> run_sweep(const SweepConfig& config, const std::filesystem::path& out_dir,
                                               int jobs = 1) {
  config.validate();
  if (jobs < 1) throw ConfigError("jobs must be positive");
  std::filesystem::create_directories(out_dir);

  std::map<std::string, ExperimentRecord> journal;
  for (auto& record : read_results(out_dir / "results.csv")) {
    journal.emplace(detail::record_key(record.dataset, record.model, record.level, record.op, record.ratio,
                                       record.repetition),
                    std::move(record));
  }

  struct Cell {
    NoiseLevel level;
    NoiseOp op;
    std::size_t ratio_index;
    int repetition;
  };

  std::vector<ExperimentRecord> records;
  for (const auto& dataset_name : config.datasets) {
    const Dataset ds = load_dataset(config.data_dir, dataset_name);

    const bool needs_roles =
        std::find(config.levels.begin(), config.levels.end(), NoiseLevel::Global) != config.levels.end();
    std::vector<int> roles;
    if (needs_roles) {
      roles = build_role_model(ds.graph, config.role_count, config.refex_depth, role_model_seed(config.base_seed))
                  .assignment;
    }

    std::vector<Cell> cells;
    for (NoiseLevel level : config.levels) {
      for (NoiseOp op : config.ops) {
        for (std::size_t ratio_index = 0; ratio_index < config.ratios.size(); ++ratio_index) {
          for (int repetition = 0; repetition < config.repetitions; ++repetition) {
            cells.push_back(Cell{level, op, ratio_index, repetition});
          }
        }
      }
    }

    std::vector<std::vector<ExperimentRecord>> cell_records(cells.size());
    std::atomic<std::size_t> next_cell{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
      for (;;) {
        const std::size_t cell_index = next_cell.fetch_add(1);
        if (cell_index >= cells.size()) return;
        {
          std::scoped_lock lock(error_mutex);
          if (first_error) return;
        }
        try {
          const Cell& cell = cells[cell_index];
          const double ratio = config.ratios[cell.ratio_index];
          const std::uint64_t seed =
              cell_seed(config.base_seed, cell.level, cell.op, cell.ratio_index, cell.repetition);

          NoiseSpec spec;
          spec.level = cell.level;
          spec.op = cell.op;
          spec.ratio = ratio;
          spec.seed = seed;
          if (cell.level == NoiseLevel::Community) spec.community_resolution = config.community_resolution;
          if (cell.level == NoiseLevel::Global) spec.role_count = config.role_count;

          const auto edge_path =
              out_dir / (detail::graph_file_stem(dataset_name, cell.level, cell.op, ratio, cell.repetition) + ".edges");
          const auto manifest_path =
              out_dir /
              (detail::graph_file_stem(dataset_name, cell.level, cell.op, ratio, cell.repetition) + ".manifest");

          std::vector<std::string> missing_models;
          for (const auto& model : config.models) {
            if (!journal.count(detail::record_key(dataset_name, model, cell.level, cell.op, ratio, cell.repetition))) {
              missing_models.push_back(model);
            }
          }
          const bool graphs_present = !config.write_graphs || detail::graph_files_valid(edge_path, manifest_path);

          for (const auto& model : config.models) {
            const auto key = detail::record_key(dataset_name, model, cell.level, cell.op, ratio, cell.repetition);
            if (const auto it = journal.find(key); it != journal.end()) {
              cell_records[cell_index].push_back(it->second);
            }
          }
          if (missing_models.empty() && graphs_present) continue;

          const auto perturb_start = std::chrono::steady_clock::now();
          PerturbOutcome outcome = perturb_graph(ds.graph, spec, needs_roles ? &roles : nullptr);
          outcome.graph.validate();
          const auto perturb_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - perturb_start)
                                      .count();

          if (config.write_graphs) {
            const std::string checksum = write_edge_list(outcome.graph, edge_path);
            write_manifest(spec, outcome.report, checksum, manifest_path);
          }

          bool first_model = true;
          for (const auto& model : missing_models) {
            const auto variant = parse_model_name(model);
            const auto train_start = std::chrono::steady_clock::now();
            const auto result =
                train_gcn(ds, outcome.graph, config.hyper, stable_mix({seed, fnv1a64(model)}), *variant);
            auto train_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                                  train_start)
                                .count();
            if (first_model) {
              train_ms += perturb_ms;
              first_model = false;
            }
            ExperimentRecord record;
            record.dataset = dataset_name;
            record.model = model;
            record.level = cell.level;
            record.op = cell.op;
            record.ratio = ratio;
            record.repetition = cell.repetition;
            record.seed = seed;
            record.accuracy = result.test_accuracy;
            record.wall_time_ms = train_ms;
            cell_records[cell_index].push_back(std::move(record));
          }
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };

    if (jobs == 1 || cells.size() <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      const int thread_count = std::min<int>(jobs, static_cast<int>(cells.size()));
      pool.reserve(static_cast<std::size_t>(thread_count));
      for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
      for (auto& thread : pool) thread.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    for (auto& batch : cell_records) {
      for (auto& record : batch) records.push_back(std::move(record));
    }
  }

  emit_results(records, out_dir / "results.csv");
  std::sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.dataset, a.model, a.level, a.op, a.ratio, a.repetition) <
           std::tie(b.dataset, b.model, b.level, b.op, b.ratio, b.repetition);
  });
  return records;
}

}  // namespace graphnoise
