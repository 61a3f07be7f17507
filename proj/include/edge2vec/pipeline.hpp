#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edge2vec/evalkit.hpp"
#include "edge2vec/skipgram.hpp"
#include "edge2vec/transition.hpp"

namespace edge2vec {

inline constexpr const char* kVersion = "0.1.0";

// Resolved configuration for every stage; defaults follow the library-wide
// parameter defaults (p=q=0.25, d=128, r=1, l=50, ratio=0.01, N=10).
struct PipelineConfig {
  std::filesystem::path input;
  std::string format = "edgelist";  // edgelist | triples
  std::string type_rule = kDefaultTypeRule;
  bool undirected = true;
  bool weighted_input = true;

  WalkParams walk;
  EmParams em;
  TrainParams train;
  bool uniform_matrix = false;  // ablation: keep M at all-ones

  std::uint64_t seed = 0;
  int threads = 0;  // 0 = available parallelism
  std::filesystem::path out_dir = "edge2vec_out";

  // evaluation inputs
  std::filesystem::path labels_file;
  std::filesystem::path positives_file;
  std::filesystem::path negatives_file;
  std::filesystem::path queries_file;
  int topk = 100;
  std::size_t max_per_class = 0;  // balanced-sampling cap, 0 = smallest class
  bool concat_edge_type_degrees = true;

  int resolved_threads() const;
};

// Artifact names inside out_dir.
namespace artifact {
inline constexpr const char* kEdges = "graph.edges.tsv";
inline constexpr const char* kNodes = "graph.nodes.tsv";
inline constexpr const char* kEtypes = "graph.etypes.tsv";
inline constexpr const char* kMeta = "graph.meta.tsv";
inline constexpr const char* kStats = "stats.tsv";
inline constexpr const char* kMatrix = "matrix.tsv";
inline constexpr const char* kIterations = "iterations.tsv";
inline constexpr const char* kWalks = "walks.txt";
inline constexpr const char* kWalkEtypes = "walks.etypes.txt";
inline constexpr const char* kEmbeddings = "embeddings.txt";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifact

struct StageRecord {
  std::string name;
  double seconds = 0.0;
  std::vector<std::string> artifacts;  // paths relative to out_dir
};

struct RunManifest {
  std::vector<StageRecord> stages;
  void write(const PipelineConfig& cfg) const;
};

// Stage entry points; each reads its inputs from cfg.out_dir (except ingest)
// and persists its outputs there. They throw on failure; the CLI maps that
// to exit codes.
StageRecord cmd_ingest(const PipelineConfig& cfg);
StageRecord cmd_matrix(const PipelineConfig& cfg);
StageRecord cmd_walks(const PipelineConfig& cfg);
StageRecord cmd_embed(const PipelineConfig& cfg);
StageRecord cmd_eval(const PipelineConfig& cfg, const std::string& subtask);
RunManifest cmd_run(const PipelineConfig& cfg);

}  // namespace edge2vec
