#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "edge2vec/corpus.hpp"
#include "edge2vec/evalkit.hpp"
#include "edge2vec/graph.hpp"
#include "edge2vec/skipgram.hpp"
#include "edge2vec/transition.hpp"

namespace edge2vec::io {

namespace fs = std::filesystem;

// Graph snapshot: canonical edge-list TSV plus vocab sidecars that pin index
// order and node types.
void write_graph_snapshot(const HetGraph& g, const fs::path& dir);
HetGraph load_graph_snapshot(const fs::path& dir);

void write_stats(const GraphStats& stats, const fs::path& path);

// Matrix TSV: header row of edge-type labels, then label + m values per row.
// Values use shortest round-trip decimal formatting, so load is bit-exact.
void write_matrix(const TransitionMatrix& m, const fs::path& path);
TransitionMatrix load_matrix(const fs::path& path);

void write_iteration_log(const std::vector<double>& changes, const fs::path& path);

// Corpus: one walk of space-separated node labels per line; the companion
// .etypes file carries the traversed edge-type labels, line-aligned.
void write_corpus(const WalkCorpus& corpus, const HetGraph& g, const fs::path& walks_path,
                  const fs::path& etypes_path);
WalkCorpus load_corpus(const fs::path& walks_path, const fs::path& etypes_path,
                       const HetGraph& g);

// word2vec text convention: "count dim" header, then label + values at 6
// decimal places.
void write_embeddings(const EmbeddingMatrix& emb, const std::vector<std::string>& labels,
                      const fs::path& path);
EmbeddingTable load_embeddings(const fs::path& path);

// node<TAB>class file, classes interned in first-appearance order
struct LabelFile {
  std::vector<std::string> nodes;
  std::vector<int> labels;
  std::vector<std::string> class_names;
};
LabelFile load_labels(const fs::path& path);

// nodeA<TAB>nodeB per line
std::vector<std::pair<std::string, std::string>> load_pairs(const fs::path& path);

// query<TAB>relevant...<TAB>relevant per line
struct QueryFile {
  std::vector<std::string> queries;
  std::vector<std::vector<std::string>> relevant;
};
QueryFile load_queries(const fs::path& path);

std::uint64_t file_checksum(const fs::path& path);  // FNV-1a over the bytes

}  // namespace edge2vec::io
