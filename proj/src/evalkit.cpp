#include "edge2vec/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "edge2vec/rng.hpp"
#include "edge2vec/transition.hpp"  // sigmoid

namespace edge2vec {

void EmbeddingTable::rebuild_index() {
  index.clear();
  index.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
}

std::size_t EmbeddingTable::require(const std::string& label) const {
  auto it = index.find(label);
  if (it == index.end()) throw std::invalid_argument("node '" + label + "' not in embeddings");
  return it->second;
}

std::vector<double> node_features(const EmbeddingTable& emb, std::span<const std::string> nodes,
                                  const HetGraph* graph, bool concat_edge_type_degrees,
                                  std::size_t* feature_dim) {
  if (concat_edge_type_degrees && graph == nullptr) {
    throw std::invalid_argument("edge-type degree features need the graph");
  }
  const std::size_t d = emb.vectors.dim;
  const std::size_t m = concat_edge_type_degrees ? graph->edge_type_count() : 0;
  if (feature_dim != nullptr) *feature_dim = d + m;

  std::vector<double> features;
  features.reserve(nodes.size() * (d + m));
  for (const std::string& label : nodes) {
    auto row = emb.vectors.row(emb.require(label));
    features.insert(features.end(), row.begin(), row.end());
    if (concat_edge_type_degrees) {
      std::vector<double> degrees(m, 0.0);
      auto v = graph->find_node(label);
      if (!v) throw std::invalid_argument("node '" + label + "' not in graph");
      for (const NeighborEntry& e : graph->neighbors(*v)) degrees[e.etype] += 1.0;
      features.insert(features.end(), degrees.begin(), degrees.end());
    }
  }
  return features;
}

std::vector<double> pair_features(const EmbeddingTable& emb, const std::string& node_a,
                                  const std::string& node_b) {
  auto a = emb.vectors.row(emb.require(node_a));
  auto b = emb.vectors.row(emb.require(node_b));
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return diff;
}

double LinearModel::score(int cls, std::span<const double> x) const {
  const double* w = weights.data() + static_cast<std::size_t>(cls) * dim;
  double s = bias[cls];
  for (std::size_t i = 0; i < dim; ++i) s += w[i] * x[i];
  return s;
}

int LinearModel::predict(std::span<const double> x) const {
  if (loss == LossKind::kLogistic && classes == 2) {
    return predict_proba(x) > 0.5 ? 1 : 0;
  }
  int best = 0;
  double best_score = score(0, x);
  for (int c = 1; c < classes; ++c) {
    double s = score(c, x);
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return best;
}

double LinearModel::predict_proba(std::span<const double> x) const {
  if (loss != LossKind::kLogistic || classes != 2) {
    throw std::logic_error("predict_proba is defined for binary logistic models");
  }
  return sigmoid(score(1, x));
}

LinearModel train_linear(const LabeledInstances& data, const LinearTrainConfig& cfg) {
  if (data.count == 0) throw std::invalid_argument("no training instances");
  std::set<int> present(data.labels.begin(), data.labels.end());
  if (present.size() < 2) throw std::invalid_argument("training data has a single class");
  if (*present.begin() < 0 || *present.rbegin() >= data.classes) {
    throw std::invalid_argument("label outside [0, classes)");
  }

  LinearModel model;
  model.classes = data.classes;
  model.dim = data.dim;
  model.loss = cfg.loss;
  model.weights.assign(static_cast<std::size_t>(data.classes) * data.dim, 0.0);
  model.bias.assign(data.classes, 0.0);

  std::vector<std::size_t> order(data.count);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(cfg.seed, "linear"));

  const std::size_t total_steps = static_cast<std::size_t>(cfg.epochs) * data.count;
  std::size_t step = 0;
  const double lr0 = 0.1;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = data.count - 1; i > 0; --i) {
      std::swap(order[i], order[rng.next_below(i + 1)]);
    }
    for (std::size_t idx : order) {
      const double lr = lr0 * (1.0 - static_cast<double>(step) / (total_steps + 1));
      ++step;
      auto x = data.row(idx);
      const int y = data.labels[idx];
      for (int c = 0; c < data.classes; ++c) {
        double* w = model.weights.data() + static_cast<std::size_t>(c) * data.dim;
        const double s = model.score(c, x);
        const double shrink = 1.0 - lr * cfg.l2;
        for (std::size_t j = 0; j < data.dim; ++j) w[j] *= shrink;
        if (cfg.loss == LossKind::kHinge) {
          const double target = (y == c) ? 1.0 : -1.0;
          if (target * s < 1.0) {
            for (std::size_t j = 0; j < data.dim; ++j) w[j] += lr * target * x[j];
            model.bias[c] += lr * target;
          }
        } else {
          const double target = (y == c) ? 1.0 : 0.0;
          const double err = target - sigmoid(s);
          for (std::size_t j = 0; j < data.dim; ++j) w[j] += lr * err * x[j];
          model.bias[c] += lr * err;
        }
      }
    }
  }
  return model;
}

ClassificationMetrics classification_metrics(std::span<const int> y_true,
                                             std::span<const int> y_pred, int classes) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("label vectors differ in length");
  if (y_true.empty()) throw std::invalid_argument("no labels");
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_true[i] >= classes || y_pred[i] < 0 || y_pred[i] >= classes) {
      throw std::invalid_argument("label outside [0, classes)");
    }
  }
  std::vector<double> tp(classes, 0.0), fp(classes, 0.0), fn(classes, 0.0);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == y_pred[i]) {
      tp[y_true[i]] += 1.0;
    } else {
      ++wrong;
      fp[y_pred[i]] += 1.0;
      fn[y_true[i]] += 1.0;
    }
  }
  ClassificationMetrics m;
  for (int c = 0; c < classes; ++c) {
    const double p = tp[c] + fp[c] > 0.0 ? tp[c] / (tp[c] + fp[c]) : 0.0;
    const double r = tp[c] + fn[c] > 0.0 ? tp[c] / (tp[c] + fn[c]) : 0.0;
    m.precision += p;
    m.recall += r;
    m.f1 += (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
  }
  m.precision /= classes;
  m.recall /= classes;
  m.f1 /= classes;
  m.hamming = static_cast<double>(wrong) / y_true.size();
  m.accuracy = 1.0 - m.hamming;
  return m;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int folds,
                                                       std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
  if (static_cast<std::size_t>(folds) > labels.size()) {
    throw std::invalid_argument("more folds than instances");
  }
  std::vector<std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= static_cast<int>(by_class.size())) by_class.resize(labels[i] + 1);
    by_class[labels[i]].push_back(i);
  }
  Rng rng(mix_seed(seed, "folds"));
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t deal = 0;  // classes deal onto a shared round-robin cursor
  for (auto& members : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.next_below(i)]);
    }
    for (std::size_t idx : members) out[deal++ % folds].push_back(idx);
  }
  return out;
}

namespace {

LabeledInstances gather(const LabeledInstances& data, std::span<const std::size_t> idx) {
  LabeledInstances sub;
  sub.count = idx.size();
  sub.dim = data.dim;
  sub.classes = data.classes;
  sub.features.reserve(idx.size() * data.dim);
  sub.labels.reserve(idx.size());
  for (std::size_t i : idx) {
    auto row = data.row(i);
    sub.features.insert(sub.features.end(), row.begin(), row.end());
    sub.labels.push_back(data.labels[i]);
  }
  return sub;
}

}  // namespace

CrossValidationResult cross_validate(const LabeledInstances& data, int folds,
                                     const LinearTrainConfig& cfg, std::uint64_t seed) {
  auto fold_sets = stratified_folds(std::span<const int>(data.labels), folds, seed);
  CrossValidationResult result;
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_idx;
    for (int g = 0; g < folds; ++g) {
      if (g != f) train_idx.insert(train_idx.end(), fold_sets[g].begin(), fold_sets[g].end());
    }
    LabeledInstances train = gather(data, train_idx);
    LinearModel model = train_linear(train, cfg);
    std::vector<int> y_true, y_pred;
    for (std::size_t i : fold_sets[f]) {
      y_true.push_back(data.labels[i]);
      y_pred.push_back(model.predict(data.row(i)));
    }
    result.folds.push_back(classification_metrics(y_true, y_pred, data.classes));
  }
  for (const auto& m : result.folds) {
    result.mean.precision += m.precision;
    result.mean.recall += m.recall;
    result.mean.f1 += m.f1;
    result.mean.hamming += m.hamming;
    result.mean.accuracy += m.accuracy;
  }
  const double k = static_cast<double>(result.folds.size());
  result.mean.precision /= k;
  result.mean.recall /= k;
  result.mean.f1 /= k;
  result.mean.hamming /= k;
  result.mean.accuracy /= k;
  return result;
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores/labels length mismatch");
  std::size_t pos = 0, neg = 0;
  for (int y : labels) (y != 0 ? pos : neg) += 1;
  if (pos == 0 || neg == 0) throw std::invalid_argument("both classes required for AUROC");

  // rank-sum with tie-averaged ranks
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t u = i; u < j; ++u) {
      if (labels[order[u]] != 0) rank_sum_pos += avg_rank;
    }
    i = j;
  }
  const double np = static_cast<double>(pos), nn = static_cast<double>(neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

LinkPredictionMetrics evaluate_link_prediction(const LabeledInstances& pairs, int folds,
                                               const LinearTrainConfig& cfg, std::uint64_t seed) {
  LinearTrainConfig logistic_cfg = cfg;
  logistic_cfg.loss = LossKind::kLogistic;
  auto fold_sets = stratified_folds(std::span<const int>(pairs.labels), folds, seed);

  std::vector<double> scores(pairs.count, 0.0);
  std::vector<int> y_pred(pairs.count, 0);
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_idx;
    for (int g = 0; g < folds; ++g) {
      if (g != f) train_idx.insert(train_idx.end(), fold_sets[g].begin(), fold_sets[g].end());
    }
    LinearModel model = train_linear(gather(pairs, train_idx), logistic_cfg);
    for (std::size_t i : fold_sets[f]) {
      scores[i] = model.predict_proba(pairs.row(i));
      y_pred[i] = scores[i] > 0.5 ? 1 : 0;
    }
  }
  LinkPredictionMetrics out;
  out.classification = classification_metrics(pairs.labels, y_pred, 2);
  out.auroc = auroc(scores, pairs.labels);
  return out;
}

std::vector<ScoredNode> cosine_topk(const EmbeddingTable& emb, const std::string& query,
                                    std::size_t k,
                                    const std::function<bool(std::size_t)>& filter) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::size_t q = emb.require(query);
  auto qrow = emb.vectors.row(q);
  double qnorm = 0.0;
  for (double x : qrow) qnorm += x * x;
  qnorm = std::sqrt(qnorm);
  if (qnorm == 0.0) throw std::invalid_argument("query '" + query + "' has a zero-norm vector");

  std::vector<std::pair<double, std::size_t>> scored;  // (-score, index) for stable ordering
  for (std::size_t i = 0; i < emb.vectors.nodes; ++i) {
    if (i == q) continue;
    if (filter && !filter(i)) continue;
    auto row = emb.vectors.row(i);
    double dot = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      dot += row[j] * qrow[j];
      norm += row[j] * row[j];
    }
    if (norm == 0.0) continue;  // cosine undefined, cannot rank
    scored.emplace_back(-dot / (std::sqrt(norm) * qnorm), i);
  }
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + keep, scored.end());
  std::vector<ScoredNode> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({emb.labels[scored[i].second], -scored[i].first});
  }
  return out;
}

RankingMetrics ranking_metrics(std::span<const RankedQuery> queries,
                               std::span<const int> cutoffs) {
  if (queries.empty()) throw std::invalid_argument("no queries");
  RankingMetrics m;
  for (int k : cutoffs) {
    m.precision_at[k] = 0.0;
    m.recall_at[k] = 0.0;
  }
  for (const RankedQuery& qr : queries) {
    if (qr.relevant.empty()) {
      throw std::invalid_argument("query '" + qr.query + "' has an empty relevance set");
    }
    const std::set<std::string> rel(qr.relevant.begin(), qr.relevant.end());

    for (int k : cutoffs) {
      std::size_t hits = 0;
      const std::size_t depth = std::min<std::size_t>(k, qr.ranked.size());
      for (std::size_t i = 0; i < depth; ++i) hits += rel.count(qr.ranked[i]);
      m.precision_at[k] += static_cast<double>(hits) / k;
      m.recall_at[k] += static_cast<double>(hits) / rel.size();
    }

    double ap_sum = 0.0, dcg = 0.0;
    std::size_t hits = 0, first_rank = 0;
    for (std::size_t i = 0; i < qr.ranked.size(); ++i) {
      if (rel.count(qr.ranked[i]) == 0) continue;
      ++hits;
      const double rank = static_cast<double>(i + 1);
      ap_sum += static_cast<double>(hits) / rank;
      dcg += 1.0 / std::log2(rank + 1.0);
      if (first_rank == 0) first_rank = i + 1;
    }
    m.map += ap_sum / rel.size();  // unretrieved relevant items contribute 0
    double idcg = 0.0;
    for (std::size_t i = 1; i <= rel.size(); ++i) idcg += 1.0 / std::log2(i + 1.0);
    m.ndcg += dcg / idcg;
    m.mrr += first_rank > 0 ? 1.0 / static_cast<double>(first_rank) : 0.0;
  }
  const double n = static_cast<double>(queries.size());
  for (int k : cutoffs) {
    m.precision_at[k] /= n;
    m.recall_at[k] /= n;
  }
  m.map /= n;
  m.ndcg /= n;
  m.mrr /= n;
  return m;
}

namespace {

// dominant eigenvector of a symmetric PSD matrix by power iteration
std::pair<std::vector<double>, double> dominant_eigen(const std::vector<double>& mat,
                                                      std::size_t d) {
  Rng rng(0x9e3779b97f4a7c15ULL);  // fixed start vector
  std::vector<double> v(d);
  for (double& x : v) x = rng.next_double() - 0.5;
  std::vector<double> next(d);
  double lambda = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      const double* row = mat.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) s += row[j] * v[j];
      next[i] = s;
    }
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return {v, 0.0};
    double diff = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      next[i] /= norm;
      diff = std::max(diff, std::abs(next[i] - v[i]));
    }
    v.swap(next);
    lambda = norm;
    if (diff < 1e-10) break;
  }
  return {v, lambda};
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

}  // namespace

Pca2d pca_project_2d(std::span<const double> data, std::size_t n, std::size_t dim) {
  if (n < 3) throw std::invalid_argument("PCA needs at least 3 points");
  if (data.size() != n * dim) throw std::invalid_argument("data size mismatch");

  std::vector<double> centered(data.begin(), data.end());
  for (std::size_t j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += centered[i * dim + j];
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) centered[i * dim + j] -= mean;
  }

  std::vector<double> cov(dim * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = centered.data() + i * dim;
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = a; b < dim; ++b) cov[a * dim + b] += row[a] * row[b];
    }
  }
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a; b < dim; ++b) {
      cov[a * dim + b] /= static_cast<double>(n - 1);
      cov[b * dim + a] = cov[a * dim + b];
    }
  }

  auto [v1, lambda1] = dominant_eigen(cov, dim);
  if (lambda1 <= 0.0) throw std::invalid_argument("centered data has rank < 2");
  // deflate and repeat
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) cov[a * dim + b] -= lambda1 * v1[a] * v1[b];
  }
  auto [v2, lambda2] = dominant_eigen(cov, dim);
  if (lambda2 <= lambda1 * 1e-12) throw std::invalid_argument("centered data has rank < 2");

  fix_sign(v1);
  fix_sign(v2);

  Pca2d out;
  out.component1 = std::move(v1);
  out.component2 = std::move(v2);
  out.variance1 = lambda1;
  out.variance2 = lambda2;
  out.coords.resize(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = centered.data() + i * dim;
    double x = 0.0, y = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      x += row[j] * out.component1[j];
      y += row[j] * out.component2[j];
    }
    out.coords[i * 2] = x;
    out.coords[i * 2 + 1] = y;
  }
  return out;
}

std::vector<std::size_t> balanced_sample(std::span<const int> labels, std::size_t cap,
                                         std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw std::invalid_argument("negative class label");
    if (labels[i] >= static_cast<int>(by_class.size())) by_class.resize(labels[i] + 1);
    by_class[labels[i]].push_back(i);
  }
  std::size_t take = cap;
  for (const auto& members : by_class) {
    if (!members.empty()) take = take == 0 ? members.size() : std::min(take, members.size());
  }
  Rng rng(mix_seed(seed, "balance"));
  std::vector<std::size_t> picked;
  for (auto& members : by_class) {
    if (members.empty()) continue;
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.next_below(i)]);
    }
    members.resize(take);
    std::sort(members.begin(), members.end());
    picked.insert(picked.end(), members.begin(), members.end());
  }
  return picked;
}

}  // namespace edge2vec
