// Command-line front end: perturb one graph, run a sweep, or evaluate a
// perturbed edge list with the GCN baselines.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 divergence.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "graphnoise/graphnoise.hpp"

namespace fs = std::filesystem;
using namespace graphnoise;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitDivergence = 3;

struct PerturbArgs {
  std::string dataset;
  std::string data_dir = "data";
  std::string level;
  std::string op;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::optional<int> threshold;
  std::optional<double> resolution;
  std::optional<int> role_count;
  int refex_depth = 2;
  std::string dump_features;
};

int run_perturb(const PerturbArgs& args) {
  const auto level = parse_noise_level(args.level);
  if (!level) throw ConfigError("unknown level '" + args.level + "'");
  const auto op = parse_noise_op(args.op);
  if (!op) throw ConfigError("unknown op '" + args.op + "'");

  NoiseSpec spec;
  spec.level = *level;
  spec.op = *op;
  spec.ratio = args.ratio;
  spec.seed = args.seed;
  if (args.threshold) spec.threshold_override = *args.threshold;
  if (args.resolution) spec.community_resolution = *args.resolution;
  if (args.role_count) spec.role_count = *args.role_count;
  try {
    spec.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }

  const Dataset ds = load_dataset(args.data_dir, args.dataset);

  std::vector<int> roles;
  if (spec.level == NoiseLevel::Global) {
    const RoleModel model =
        build_role_model(ds.graph, spec.effective_role_count(), args.refex_depth, role_model_seed(spec.seed));
    roles = model.assignment;
    if (!args.dump_features.empty()) write_features(model.features, args.dump_features);
  }

  const PerturbOutcome outcome = perturb_graph(ds.graph, spec, roles.empty() ? nullptr : &roles);
  outcome.graph.validate();

  fs::create_directories(args.out_dir);
  const std::string stem = args.dataset + "_" + std::string(to_string(spec.level)) + "_" +
                           std::string(to_string(spec.op)) + "_r" + format_double(spec.ratio) + "_s" +
                           std::to_string(spec.seed);
  const fs::path edge_path = fs::path(args.out_dir) / (stem + ".edges");
  const fs::path manifest_path = fs::path(args.out_dir) / (stem + ".manifest");
  const std::string checksum = write_edge_list(outcome.graph, edge_path);
  write_manifest(spec, outcome.report, checksum, manifest_path);

  std::cout << "edges=" << edge_path.string() << "\n"
            << "manifest=" << manifest_path.string() << "\n"
            << "checksum=" << checksum << "\n"
            << "deleted=" << outcome.report.deleted.size() << " added=" << outcome.report.added.size()
            << " skipped=" << outcome.report.skipped_pairs << "\n";
  return kExitOk;
}

int run_sweep_command(const std::string& config_path, const std::string& out_dir, int jobs) {
  const SweepConfig config = parse_sweep_config_file(config_path);
  const auto records = run_sweep(config, out_dir, jobs);
  std::cout << "records=" << records.size() << "\n"
            << "results=" << (fs::path(out_dir) / "results.csv").string() << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string model = "gcn";
  std::string graph_path;
  std::string dataset;
  std::string data_dir = "data";
  std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& args) {
  const auto variant = parse_model_name(args.model);
  if (!variant) throw ConfigError("unknown model '" + args.model + "'");
  const Dataset ds = load_dataset(args.data_dir, args.dataset);
  const Graph graph = read_edge_list(args.graph_path, ds.graph.node_count()).graph;
  graph.validate();
  const GcnHyper hyper;
  const TrainOutcome outcome = train_gcn(ds, graph, hyper, args.seed, *variant);
  std::cout << "model=" << args.model << "\n"
            << "accuracy=" << format_double(outcome.test_accuracy) << "\n"
            << "validation=" << format_double(outcome.best_validation_accuracy) << "\n"
            << "epochs=" << outcome.epochs_run << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structural noise injection and GCN robustness harness"};
  app.require_subcommand(1);

  PerturbArgs perturb;
  auto* perturb_cmd = app.add_subcommand("perturb", "perturb one dataset graph and write the edge list");
  perturb_cmd->add_option("--dataset", perturb.dataset, "dataset name")->required();
  perturb_cmd->add_option("--data-dir", perturb.data_dir, "dataset directory");
  perturb_cmd->add_option("--level", perturb.level, "local|community|global")->required();
  perturb_cmd->add_option("--op", perturb.op, "delete|flip|add")->required();
  perturb_cmd->add_option("--ratio", perturb.ratio, "noise ratio in (0,1]")->required();
  perturb_cmd->add_option("--seed", perturb.seed, "random seed");
  perturb_cmd->add_option("--out", perturb.out_dir, "output directory")->required();
  std::int64_t threshold_arg = -1;
  perturb_cmd->add_option("--threshold", threshold_arg, "degree threshold override (local)");
  double resolution_arg = 0.0;
  perturb_cmd->add_option("--resolution", resolution_arg, "louvain resolution (community)");
  std::int64_t roles_arg = 0;
  perturb_cmd->add_option("--roles", roles_arg, "role count (global; default 6)");
  perturb_cmd->add_option("--refex-depth", perturb.refex_depth, "feature recursion depth (global)");
  perturb_cmd->add_option("--dump-features", perturb.dump_features, "write the role feature matrix as CSV");

  std::string sweep_config, sweep_out;
  int sweep_jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "run the full experiment grid from a config file");
  sweep_cmd->add_option("--config", sweep_config, "key=value config file")->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
  sweep_cmd->add_option("--jobs", sweep_jobs, "parallel worker count");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "train and evaluate a model on a perturbed edge list");
  eval_cmd->add_option("--model", eval.model, "gcn|gcn-dropedge");
  eval_cmd->add_option("--graph", eval.graph_path, "edge-list file")->required();
  eval_cmd->add_option("--dataset", eval.dataset, "dataset name (features/labels/split)")->required();
  eval_cmd->add_option("--data-dir", eval.data_dir, "dataset directory");
  eval_cmd->add_option("--seed", eval.seed, "training seed");

  try {
    app.parse(argc, argv);
    if (perturb_cmd->parsed()) {
      if (perturb_cmd->count("--threshold")) perturb.threshold = static_cast<int>(threshold_arg);
      if (perturb_cmd->count("--resolution")) perturb.resolution = resolution_arg;
      if (perturb_cmd->count("--roles")) perturb.role_count = static_cast<int>(roles_arg);
      return run_perturb(perturb);
    }
    if (sweep_cmd->parsed()) return run_sweep_command(sweep_config, sweep_out, sweep_jobs);
    if (eval_cmd->parsed()) return run_eval(eval);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const InputError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
