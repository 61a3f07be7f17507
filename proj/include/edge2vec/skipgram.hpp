#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "edge2vec/corpus.hpp"
#include "edge2vec/rng.hpp"

namespace edge2vec {

// Row-major |V| x d node embedding table. A single table serves both center
// and context roles.
struct EmbeddingMatrix {
  std::size_t nodes = 0;
  std::size_t dim = 0;
  std::vector<double> data;

  std::span<double> row(std::size_t i) { return {data.data() + i * dim, dim}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
};

enum class TrainMode { kDeterministic, kParallel };

struct TrainParams {
  int dim = 128;          // embedding dimension d
  int window = 10;        // context window c >= 1
  int negatives = 5;      // k >= 1 draws per pair (0 allowed in library use)
  int epochs = 5;         // >= 1
  double lr_initial = 0.025;
  double lr_final = 1e-4;
  TrainMode mode = TrainMode::kDeterministic;
  int threads = 1;        // used by kParallel only

  void validate() const;
};

// Entries uniform in [-0.5/d, 0.5/d], reproducible per seed.
EmbeddingMatrix init_embeddings(std::size_t nodes, std::size_t dim, std::uint64_t seed);

// (center, context) pairs of one walk: for every position i, all j != i with
// |i-j| <= window, j ascending. Appends to `out`.
void append_walk_pairs(std::span<const NodeIndex> walk, int window,
                       std::vector<std::pair<NodeIndex, NodeIndex>>& out);

std::vector<std::pair<NodeIndex, NodeIndex>> extract_pairs(const WalkCorpus& corpus, int window);

// Negative-sampling objective for one pair:
// log sigmoid(f_t . f_v) + sum_i log sigmoid(-f_ui . f_v). Always <= 0.
double pair_objective(std::span<const double> center, std::span<const double> context,
                      std::span<const std::span<const double>> negatives);

// Ascent gradients of pair_objective w.r.t. center, context and each negative.
struct PairGradient {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};
PairGradient pair_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::span<const double>> negatives);

// One SGD ascent step on rows (v, t, negatives) of the table. All dot
// products and the context/negative updates use the pre-update center row,
// which keeps the step well defined when v and t alias the same row.
void sgd_update(EmbeddingMatrix& emb, NodeIndex center, NodeIndex context,
                std::span<const NodeIndex> negatives, double lr);

// Uniform draw over the vocabulary, rejecting only the context node.
NodeIndex draw_negative(Rng& rng, std::size_t vocab_size, NodeIndex context);

// Trains over `epochs` passes of the pair stream with the learning rate
// decaying linearly from lr_initial to lr_final. Deterministic mode is a
// serial reference, bit-reproducible per seed; parallel mode updates shared
// rows without locks and is not reproducible.
EmbeddingMatrix train_embeddings(const WalkCorpus& corpus, std::size_t vocab_size,
                                 const TrainParams& params, std::uint64_t seed);

}  // namespace edge2vec
