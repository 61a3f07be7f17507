#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "edge2vec/corpus.hpp"
#include "edge2vec/graph.hpp"

namespace edge2vec {

// Square edge-type -> edge-type transition weight matrix. Starts as all-ones;
// after at least one refit every entry lies in (0,1) and the matrix is
// symmetric.
struct TransitionMatrix {
  std::size_t size = 0;
  std::vector<double> values;        // row-major size x size
  std::vector<std::string> labels;   // edge-type labels, row/col order

  static TransitionMatrix ones(std::vector<std::string> labels);

  double at(std::size_t i, std::size_t j) const { return values[i * size + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * size + j]; }
};

struct EmParams {
  int iterations = 10;         // >= 1
  double sample_ratio = 0.01;  // in (0,1], fraction of nodes walked per iteration

  void validate() const;
};

// Row i = occurrences of edge type i per walk, columns aligned with the
// corpus walk order. Values are whole numbers; stored as double for the
// correlation step.
struct EdgeTypeCounts {
  std::size_t types = 0;
  std::size_t walks = 0;
  std::vector<double> counts;  // row-major types x walks

  std::span<const double> row(std::size_t i) const { return {counts.data() + i * walks, walks}; }
};

EdgeTypeCounts edge_type_count_vectors(const WalkCorpus& corpus, std::size_t type_count);

// Sample Pearson correlation with the constant-vector convention:
// element-wise identical vectors correlate at 1, otherwise a zero-variance
// side yields 0. Throws on length mismatch or fewer than 2 entries.
double pearson_correlation(std::span<const double> v1, std::span<const double> v2);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// M[i][j] = sigmoid(pearson(row_i, row_j)). Needs at least 2 walks.
TransitionMatrix update_matrix(const EdgeTypeCounts& counts, std::vector<std::string> labels);

struct EmResult {
  TransitionMatrix matrix;
  WalkCorpus corpus;                      // walks of the final iteration
  std::vector<double> iteration_changes;  // max|M_t - M_{t-1}| per iteration
};

using EmObserver = std::function<void(int iteration, const TransitionMatrix&)>;

// Alternates walk generation under the current matrix with a correlation
// refit, starting from the all-ones matrix. Each iteration draws a fresh
// uniform sample of ceil(sample_ratio * |V|) start nodes without replacement.
EmResult train_transition_matrix(const HetGraph& graph, const EmParams& em,
                                 const WalkParams& walk, std::uint64_t seed,
                                 int threads = 1, const EmObserver& observer = {});

}  // namespace edge2vec
