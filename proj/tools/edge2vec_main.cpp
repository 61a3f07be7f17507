// edge2vec command-line pipeline: ingest -> matrix -> walks -> embed -> eval.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "edge2vec/pipeline.hpp"

namespace {

void add_common_flags(CLI::App* cmd, edge2vec::PipelineConfig& cfg) {
  cmd->add_option("--out-dir", cfg.out_dir, "Artifact directory")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

void add_walk_flags(CLI::App* cmd, edge2vec::PipelineConfig& cfg) {
  cmd->add_option("--p", cfg.walk.p, "Return parameter")->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--q", cfg.walk.q, "In-out parameter")->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--walk-length", cfg.walk.walk_length, "Nodes per walk")
      ->check(CLI::Range(2, 1 << 20))->capture_default_str();
  cmd->add_option("--walks-per-node", cfg.walk.walks_per_node, "Walks started per node")
      ->check(CLI::PositiveNumber)->capture_default_str();
}

void add_mode_flag(CLI::App* cmd, std::string& mode) {
  cmd->add_option("--mode", mode, "deterministic or parallel")
      ->check(CLI::IsMember({"deterministic", "parallel"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  edge2vec::PipelineConfig cfg;
  std::string mode = "deterministic";
  std::string eval_subtask;

  CLI::App app{"edge2vec: edge-semantics-aware node embeddings for heterogeneous graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", edge2vec::kVersion);

  auto* ingest = app.add_subcommand("ingest", "Parse and index the input graph");
  ingest->add_option("--input", cfg.input, "Edge-list or triple file")->required();
  ingest->add_option("--format", cfg.format, "edgelist or triples")
      ->check(CLI::IsMember({"edgelist", "triples"}))->capture_default_str();
  ingest->add_option("--type-rule", cfg.type_rule,
                     "Regex with one capture group for node types (triples)")
      ->capture_default_str();
  ingest->add_flag("--undirected,!--directed", cfg.undirected, "Treat edges as undirected")
      ->capture_default_str();
  ingest->add_flag("!--unweighted", cfg.weighted_input, "Input has no weight column");
  add_common_flags(ingest, cfg);

  auto* matrix = app.add_subcommand("matrix", "Train the edge-type transition matrix");
  matrix->add_option("--em-iters", cfg.em.iterations, "EM iterations")
      ->check(CLI::PositiveNumber)->capture_default_str();
  matrix->add_option("--sample-ratio", cfg.em.sample_ratio, "Node sample ratio per iteration")
      ->check(CLI::Range(1e-9, 1.0))->capture_default_str();
  add_walk_flags(matrix, cfg);
  add_common_flags(matrix, cfg);

  auto* walks = app.add_subcommand("walks", "Generate the full walk corpus");
  walks->add_flag("--uniform-matrix", cfg.uniform_matrix,
                  "Ablation: all-ones transition matrix (node2vec-style walks)");
  add_walk_flags(walks, cfg);
  add_common_flags(walks, cfg);

  auto* embed = app.add_subcommand("embed", "Train node embeddings from the corpus");
  embed->add_option("--dim", cfg.train.dim, "Embedding dimension")->check(CLI::PositiveNumber)
      ->capture_default_str();
  embed->add_option("--window", cfg.train.window, "Context window")->check(CLI::PositiveNumber)
      ->capture_default_str();
  embed->add_option("--negatives", cfg.train.negatives, "Negative samples per pair")
      ->check(CLI::PositiveNumber)->capture_default_str();
  embed->add_option("--epochs", cfg.train.epochs, "Passes over the corpus")
      ->check(CLI::PositiveNumber)->capture_default_str();
  embed->add_option("--lr", cfg.train.lr_initial, "Initial learning rate")
      ->check(CLI::PositiveNumber)->capture_default_str();
  embed->add_option("--lr-min", cfg.train.lr_final, "Final learning rate")
      ->check(CLI::PositiveNumber)->capture_default_str();
  add_mode_flag(embed, mode);
  add_common_flags(embed, cfg);

  auto* eval = app.add_subcommand("eval", "Evaluate embeddings");
  eval->add_option("subtask", eval_subtask, "classify | linkpred | rank | similar | project")
      ->required();
  eval->add_option("--labels", cfg.labels_file, "node<TAB>class file");
  eval->add_option("--positives", cfg.positives_file, "Positive pair file");
  eval->add_option("--negatives-file", cfg.negatives_file, "Negative pair file");
  eval->add_option("--queries", cfg.queries_file, "query<TAB>relevant... file");
  eval->add_option("--topk", cfg.topk, "Retrieval depth")->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval->add_option("--max-per-class", cfg.max_per_class,
                   "Cap for balanced class sampling (0 = smallest class)")
      ->capture_default_str();
  eval->add_flag("!--no-degree-features", cfg.concat_edge_type_degrees,
                 "Drop per-edge-type degree features in classify");
  add_common_flags(eval, cfg);

  auto* run = app.add_subcommand("run", "Full pipeline: ingest, matrix, walks, embed, eval");
  run->add_option("--input", cfg.input, "Edge-list or triple file")->required();
  run->add_option("--format", cfg.format, "edgelist or triples")
      ->check(CLI::IsMember({"edgelist", "triples"}))->capture_default_str();
  run->add_option("--type-rule", cfg.type_rule, "Node-type regex (triples)")
      ->capture_default_str();
  run->add_flag("--undirected,!--directed", cfg.undirected, "Treat edges as undirected")
      ->capture_default_str();
  run->add_flag("!--unweighted", cfg.weighted_input, "Input has no weight column");
  run->add_option("--em-iters", cfg.em.iterations, "EM iterations")->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--sample-ratio", cfg.em.sample_ratio, "Node sample ratio per iteration")
      ->check(CLI::Range(1e-9, 1.0))->capture_default_str();
  run->add_flag("--uniform-matrix", cfg.uniform_matrix, "Skip matrix training (ablation)");
  run->add_option("--dim", cfg.train.dim, "Embedding dimension")->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--window", cfg.train.window, "Context window")->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--negatives", cfg.train.negatives, "Negative samples per pair")
      ->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--epochs", cfg.train.epochs, "Passes over the corpus")
      ->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--lr", cfg.train.lr_initial, "Initial learning rate")
      ->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--lr-min", cfg.train.lr_final, "Final learning rate")
      ->check(CLI::PositiveNumber)->capture_default_str();
  run->add_option("--labels", cfg.labels_file, "node<TAB>class file (enables eval classify)");
  run->add_option("--positives", cfg.positives_file, "Positive pairs (enables eval linkpred)");
  run->add_option("--negatives-file", cfg.negatives_file, "Negative pairs");
  run->add_option("--queries", cfg.queries_file, "Queries (enables eval rank)");
  run->add_option("--topk", cfg.topk, "Retrieval depth")->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_walk_flags(run, cfg);
  add_mode_flag(run, mode);
  add_common_flags(run, cfg);

  CLI11_PARSE(app, argc, argv);
  cfg.train.mode = mode == "parallel" ? edge2vec::TrainMode::kParallel
                                      : edge2vec::TrainMode::kDeterministic;

  try {
    std::filesystem::create_directories(cfg.out_dir);
    if (*ingest) {
      auto stage = edge2vec::cmd_ingest(cfg);
      std::printf("%s done in %.2fs\n", stage.name.c_str(), stage.seconds);
    } else if (*matrix) {
      auto stage = edge2vec::cmd_matrix(cfg);
      std::printf("%s done in %.2fs\n", stage.name.c_str(), stage.seconds);
    } else if (*walks) {
      auto stage = edge2vec::cmd_walks(cfg);
      std::printf("%s done in %.2fs\n", stage.name.c_str(), stage.seconds);
    } else if (*embed) {
      auto stage = edge2vec::cmd_embed(cfg);
      std::printf("%s done in %.2fs\n", stage.name.c_str(), stage.seconds);
    } else if (*eval) {
      auto stage = edge2vec::cmd_eval(cfg, eval_subtask);
      std::printf("%s done in %.2fs\n", stage.name.c_str(), stage.seconds);
    } else if (*run) {
      auto manifest = edge2vec::cmd_run(cfg);
      for (const auto& stage : manifest.stages) {
        std::printf("%s done in %.2fs\n", stage.name.c_str(), stage.seconds);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
