#include "edge2vec/skipgram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "edge2vec/rng.hpp"
#include "edge2vec/transition.hpp"  // sigmoid

namespace edge2vec {

void TrainParams::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (negatives < 0) throw std::invalid_argument("negatives must be >= 0");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(lr_initial > lr_final) || !(lr_final > 0.0)) {
    throw std::invalid_argument("learning rates must satisfy lr_initial > lr_final > 0");
  }
}

EmbeddingMatrix init_embeddings(std::size_t nodes, std::size_t dim, std::uint64_t seed) {
  if (nodes < 1 || dim < 1) throw std::invalid_argument("embedding shape must be >= 1");
  EmbeddingMatrix emb;
  emb.nodes = nodes;
  emb.dim = dim;
  emb.data.resize(nodes * dim);
  Rng rng(mix_seed(seed, "init"));
  const double half = 0.5 / static_cast<double>(dim);
  for (double& x : emb.data) x = (rng.next_double() * 2.0 - 1.0) * half;
  return emb;
}

void append_walk_pairs(std::span<const NodeIndex> walk, int window,
                       std::vector<std::pair<NodeIndex, NodeIndex>>& out) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(walk.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - window);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + window);
    for (std::ptrdiff_t j = lo; j <= hi; ++j) {
      if (j != i) out.emplace_back(walk[i], walk[j]);
    }
  }
}

std::vector<std::pair<NodeIndex, NodeIndex>> extract_pairs(const WalkCorpus& corpus, int window) {
  std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
  for (const auto& walk : corpus.node_walks) append_walk_pairs(walk, window, pairs);
  return pairs;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// log(sigmoid(x)) without overflow for large |x|
double log_sigmoid(double x) {
  if (x > 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

}  // namespace

double pair_objective(std::span<const double> center, std::span<const double> context,
                      std::span<const std::span<const double>> negatives) {
  double obj = log_sigmoid(dot(context, center));
  for (const auto& neg : negatives) obj += log_sigmoid(-dot(neg, center));
  return obj;
}

PairGradient pair_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::span<const double>> negatives) {
  const std::size_t d = center.size();
  PairGradient g;
  g.center.assign(d, 0.0);
  g.context.assign(d, 0.0);
  g.negatives.assign(negatives.size(), std::vector<double>(d, 0.0));

  const double gpos = 1.0 - sigmoid(dot(context, center));
  for (std::size_t c = 0; c < d; ++c) {
    g.center[c] = gpos * context[c];
    g.context[c] = gpos * center[c];
  }
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    const double gneg = sigmoid(dot(negatives[i], center));
    for (std::size_t c = 0; c < d; ++c) {
      g.center[c] -= gneg * negatives[i][c];
      g.negatives[i][c] = -gneg * center[c];
    }
  }
  return g;
}

void sgd_update(EmbeddingMatrix& emb, NodeIndex center, NodeIndex context,
                std::span<const NodeIndex> negatives, double lr) {
  const std::size_t d = emb.dim;
  auto fv = emb.row(center);

  // snapshot of the center row; context/negative rows are read before fv moves
  thread_local std::vector<double> fv_old;
  fv_old.assign(fv.begin(), fv.end());

  auto ft = emb.row(context);
  const double gpos = 1.0 - sigmoid(dot(ft, fv_old));
  for (std::size_t c = 0; c < d; ++c) fv[c] += lr * gpos * ft[c];

  thread_local std::vector<double> gneg;
  gneg.resize(negatives.size());
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    auto fu = emb.row(negatives[i]);
    gneg[i] = sigmoid(dot(fu, fv_old));
    for (std::size_t c = 0; c < d; ++c) fv[c] -= lr * gneg[i] * fu[c];
  }
  for (std::size_t c = 0; c < d; ++c) ft[c] += lr * gpos * fv_old[c];
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    auto fu = emb.row(negatives[i]);
    for (std::size_t c = 0; c < d; ++c) fu[c] -= lr * gneg[i] * fv_old[c];
  }
}

namespace {

void check_corpus(const WalkCorpus& corpus, std::size_t vocab_size) {
  if (corpus.empty()) throw std::invalid_argument("corpus is empty");
  for (const auto& walk : corpus.node_walks) {
    for (NodeIndex v : walk) {
      if (v >= vocab_size) {
        throw std::invalid_argument("corpus references node " + std::to_string(v) +
                                    " outside the vocabulary");
      }
    }
  }
}

std::size_t count_walk_pairs(std::size_t walk_len, int window) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(walk_len);
  std::size_t count = 0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - window);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + window);
    count += static_cast<std::size_t>(hi - lo);  // j == i excluded
  }
  return count;
}

}  // namespace

// context node t is excluded from negative draws; the center may collide
NodeIndex draw_negative(Rng& rng, std::size_t vocab_size, NodeIndex context) {
  while (true) {
    NodeIndex u = static_cast<NodeIndex>(rng.next_below(vocab_size));
    if (u != context || vocab_size == 1) return u;
  }
}

EmbeddingMatrix train_embeddings(const WalkCorpus& corpus, std::size_t vocab_size,
                                 const TrainParams& params, std::uint64_t seed) {
  params.validate();
  check_corpus(corpus, vocab_size);

  EmbeddingMatrix emb = init_embeddings(vocab_size, params.dim, seed);

  std::size_t pairs_per_epoch = 0;
  for (const auto& walk : corpus.node_walks) {
    pairs_per_epoch += count_walk_pairs(walk.size(), params.window);
  }
  const std::size_t total_pairs =
      std::max<std::size_t>(1, pairs_per_epoch * static_cast<std::size_t>(params.epochs));
  const double lr_span = params.lr_initial - params.lr_final;
  auto lr_at = [&](std::size_t t) {
    double lr = params.lr_initial - lr_span * (static_cast<double>(t) / total_pairs);
    return std::max(lr, params.lr_final);
  };
  const std::uint64_t neg_seed = mix_seed(seed, "neg");

  if (params.mode == TrainMode::kDeterministic) {
    Rng rng(neg_seed);
    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    std::vector<NodeIndex> negs(params.negatives);
    std::size_t t = 0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      for (const auto& walk : corpus.node_walks) {
        pairs.clear();
        append_walk_pairs(walk, params.window, pairs);
        for (const auto& [v, ctx] : pairs) {
          for (int i = 0; i < params.negatives; ++i) negs[i] = draw_negative(rng, vocab_size, ctx);
          sgd_update(emb, v, ctx, negs, lr_at(t));
          ++t;
        }
      }
    }
    return emb;
  }

  // parallel mode: lock-free shared row updates, outcome depends on the
  // interleaving; learning rate driven by a relaxed global pair counter
  std::atomic<std::size_t> progress{0};
  const std::int64_t walks = static_cast<std::int64_t>(corpus.node_walks.size());
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
#pragma omp parallel num_threads(params.threads > 0 ? params.threads : 1)
    {
      std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
      std::vector<NodeIndex> negs(params.negatives);
#pragma omp for schedule(dynamic, 8)
      for (std::int64_t w = 0; w < walks; ++w) {
        Rng rng(stream_seed(neg_seed, static_cast<std::uint64_t>(epoch), w));
        pairs.clear();
        append_walk_pairs(corpus.node_walks[w], params.window, pairs);
        std::size_t t = progress.fetch_add(pairs.size(), std::memory_order_relaxed);
        for (const auto& [v, ctx] : pairs) {
          for (int i = 0; i < params.negatives; ++i) negs[i] = draw_negative(rng, vocab_size, ctx);
          sgd_update(emb, v, ctx, negs, lr_at(t));
          ++t;
        }
      }
    }
  }
  return emb;
}

}  // namespace edge2vec
