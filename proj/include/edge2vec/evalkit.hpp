#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "edge2vec/graph.hpp"
#include "edge2vec/skipgram.hpp"

namespace edge2vec {

// Label-keyed embedding table as loaded from an embedding artifact.
struct EmbeddingTable {
  std::vector<std::string> labels;
  EmbeddingMatrix vectors;
  std::unordered_map<std::string, std::size_t> index;

  void rebuild_index();
  std::size_t require(const std::string& label) const;  // throws naming the node
};

struct LabeledInstances {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> features;  // row-major count x dim
  std::vector<int> labels;       // in [0, classes)
  int classes = 0;

  std::span<const double> row(std::size_t i) const { return {features.data() + i * dim, dim}; }
};

// Feature rows for the named nodes: the embedding, optionally concatenated
// with the per-edge-type incident-edge counts from the graph.
std::vector<double> node_features(const EmbeddingTable& emb, std::span<const std::string> nodes,
                                  const HetGraph* graph, bool concat_edge_type_degrees,
                                  std::size_t* feature_dim = nullptr);

// Difference feature f_A - f_B for a node pair.
std::vector<double> pair_features(const EmbeddingTable& emb, const std::string& node_a,
                                  const std::string& node_b);

enum class LossKind { kHinge, kLogistic };

// One-vs-rest linear model trained by SGD; hinge loss realizes the linear
// SVM, log loss the logistic classifier.
struct LinearModel {
  int classes = 0;
  std::size_t dim = 0;
  LossKind loss = LossKind::kHinge;
  std::vector<double> weights;  // row-major classes x dim
  std::vector<double> bias;

  double score(int cls, std::span<const double> x) const;
  int predict(std::span<const double> x) const;
  // binary logistic only: P(label 1)
  double predict_proba(std::span<const double> x) const;
};

struct LinearTrainConfig {
  LossKind loss = LossKind::kHinge;
  double l2 = 1e-4;
  int epochs = 50;
  std::uint64_t seed = 0;
};

LinearModel train_linear(const LabeledInstances& data, const LinearTrainConfig& cfg);

struct ClassificationMetrics {
  double precision = 0.0;  // macro
  double recall = 0.0;     // macro
  double f1 = 0.0;         // macro
  double hamming = 0.0;    // error fraction
  double accuracy = 0.0;
};

ClassificationMetrics classification_metrics(std::span<const int> y_true,
                                             std::span<const int> y_pred, int classes);

struct CrossValidationResult {
  std::vector<ClassificationMetrics> folds;
  ClassificationMetrics mean;
};

// Stratified k-fold: per-fold class proportions within one instance of the
// global split.
CrossValidationResult cross_validate(const LabeledInstances& data, int folds,
                                     const LinearTrainConfig& cfg, std::uint64_t seed);

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int folds,
                                                       std::uint64_t seed);

// Mann-Whitney statistic: fraction of (positive, negative) score pairs with
// the positive ranked higher, ties at half weight.
double auroc(std::span<const double> scores, std::span<const int> labels);

struct LinkPredictionMetrics {
  ClassificationMetrics classification;
  double auroc = 0.0;
};

// 10-fold protocol over pair features with a logistic model; out-of-fold
// probabilities are pooled for AUROC and thresholded at 0.5 for the rest.
LinkPredictionMetrics evaluate_link_prediction(const LabeledInstances& pairs, int folds,
                                               const LinearTrainConfig& cfg, std::uint64_t seed);

struct ScoredNode {
  std::string label;
  double score;
};

// Descending cosine similarity against the query row; ties broken by
// ascending table index, the query excluded, zero-norm candidates skipped.
std::vector<ScoredNode> cosine_topk(const EmbeddingTable& emb, const std::string& query,
                                    std::size_t k,
                                    const std::function<bool(std::size_t)>& filter = {});

struct RankedQuery {
  std::string query;
  std::vector<std::string> ranked;           // retrieval order
  std::vector<std::string> relevant;         // non-empty
};

struct RankingMetrics {
  std::unordered_map<int, double> precision_at;  // keyed by cutoff
  std::unordered_map<int, double> recall_at;
  double map = 0.0;
  double ndcg = 0.0;
  double mrr = 0.0;
};

RankingMetrics ranking_metrics(std::span<const RankedQuery> queries,
                               std::span<const int> cutoffs);

// Mean-centered projection onto the top-2 principal components, computed by
// deflated power iteration on the d x d covariance (tolerance 1e-10, at most
// 10k iterations). Component signs are fixed so the largest-magnitude
// loading is positive. Throws if n < 3 or the centered data has rank < 2.
struct Pca2d {
  std::vector<double> coords;     // row-major n x 2
  std::vector<double> component1;  // d loadings
  std::vector<double> component2;
  double variance1 = 0.0;
  double variance2 = 0.0;
};

Pca2d pca_project_2d(std::span<const double> data, std::size_t n, std::size_t dim);

// Equal class representation: per class min(count, cap) indices, cap 0 = the
// smallest class count. Selection order is deterministic per seed.
std::vector<std::size_t> balanced_sample(std::span<const int> labels, std::size_t cap,
                                         std::uint64_t seed);

}  // namespace edge2vec
