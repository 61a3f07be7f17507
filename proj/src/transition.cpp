#include "edge2vec/transition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "edge2vec/rng.hpp"
#include "edge2vec/walker.hpp"

namespace edge2vec {

void EmParams::validate() const {
  if (iterations < 1) throw std::invalid_argument("EM iterations must be >= 1");
  if (sample_ratio <= 0.0 || sample_ratio > 1.0) {
    throw std::invalid_argument("sample ratio must be in (0,1]");
  }
}

TransitionMatrix TransitionMatrix::ones(std::vector<std::string> labels) {
  TransitionMatrix m;
  m.size = labels.size();
  m.labels = std::move(labels);
  m.values.assign(m.size * m.size, 1.0);
  return m;
}

EdgeTypeCounts edge_type_count_vectors(const WalkCorpus& corpus, std::size_t type_count) {
  if (corpus.empty()) throw std::invalid_argument("corpus is empty");
  EdgeTypeCounts c;
  c.types = type_count;
  c.walks = corpus.size();
  c.counts.assign(type_count * corpus.size(), 0.0);
  for (std::size_t w = 0; w < corpus.edge_walks.size(); ++w) {
    for (EdgeTypeIndex t : corpus.edge_walks[w]) {
      if (t >= type_count) throw std::out_of_range("edge type out of range in corpus");
      c.counts[static_cast<std::size_t>(t) * c.walks + w] += 1.0;
    }
  }
  return c;
}

double pearson_correlation(std::span<const double> v1, std::span<const double> v2) {
  if (v1.size() != v2.size()) throw std::invalid_argument("count vectors differ in length");
  if (v1.size() < 2) throw std::invalid_argument("count vectors need at least 2 entries");
  if (std::equal(v1.begin(), v1.end(), v2.begin())) return 1.0;

  const double n = static_cast<double>(v1.size());
  const double mean1 = std::accumulate(v1.begin(), v1.end(), 0.0) / n;
  const double mean2 = std::accumulate(v2.begin(), v2.end(), 0.0) / n;
  double cov = 0.0, var1 = 0.0, var2 = 0.0;
  for (std::size_t i = 0; i < v1.size(); ++i) {
    const double a = v1[i] - mean1;
    const double b = v2[i] - mean2;
    cov += a * b;
    var1 += a * a;
    var2 += b * b;
  }
  if (var1 == 0.0 || var2 == 0.0) return 0.0;  // zero-variance fallback
  return std::clamp(cov / std::sqrt(var1 * var2), -1.0, 1.0);
}

TransitionMatrix update_matrix(const EdgeTypeCounts& counts, std::vector<std::string> labels) {
  if (counts.walks < 2) throw std::invalid_argument("need at least 2 walks to refit");
  if (labels.size() != counts.types) throw std::invalid_argument("label count mismatch");
  TransitionMatrix m;
  m.size = counts.types;
  m.labels = std::move(labels);
  m.values.assign(m.size * m.size, 0.0);
  const std::int64_t mm = static_cast<std::int64_t>(m.size);
#pragma omp parallel for schedule(static) if (mm > 8)
  for (std::int64_t i = 0; i < mm; ++i) {
    for (std::int64_t j = i; j < mm; ++j) {
      const double value = sigmoid(pearson_correlation(counts.row(i), counts.row(j)));
      m.at(i, j) = value;
      m.at(j, i) = value;  // Pearson is symmetric
    }
  }
  return m;
}

EmResult train_transition_matrix(const HetGraph& graph, const EmParams& em,
                                 const WalkParams& walk, std::uint64_t seed, int threads,
                                 const EmObserver& observer) {
  em.validate();
  walk.validate();
  const std::size_t n = graph.node_count();
  std::size_t sample_size =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(em.sample_ratio * n)));
  // the refit needs >= 2 walks; widen a degenerate sample when the graph allows
  while (sample_size < n && sample_size * walk.walks_per_node < 2) ++sample_size;

  EmResult result;
  result.matrix = TransitionMatrix::ones(graph.edge_type_labels());

  std::vector<NodeIndex> pool(n);
  std::iota(pool.begin(), pool.end(), NodeIndex{0});

  for (int iter = 0; iter < em.iterations; ++iter) {
    // fresh uniform sample without replacement (partial Fisher-Yates)
    Rng sample_rng(stream_seed(mix_seed(seed, "em-sample"), 0, iter));
    for (std::size_t i = 0; i < sample_size; ++i) {
      std::size_t j = i + sample_rng.next_below(n - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<NodeIndex> starts(pool.begin(), pool.begin() + sample_size);

    const std::uint64_t walk_seed = stream_seed(mix_seed(seed, "em-walks"), 0, iter);
    result.corpus = generate_corpus(graph, result.matrix, starts, walk, walk_seed, threads);

    EdgeTypeCounts counts = edge_type_count_vectors(result.corpus, graph.edge_type_count());
    TransitionMatrix next = update_matrix(counts, graph.edge_type_labels());

    double max_change = 0.0;
    for (std::size_t k = 0; k < next.values.size(); ++k) {
      max_change = std::max(max_change, std::abs(next.values[k] - result.matrix.values[k]));
    }
    result.iteration_changes.push_back(max_change);
    result.matrix = std::move(next);
    if (observer) observer(iter, result.matrix);
  }
  return result;
}

}  // namespace edge2vec
