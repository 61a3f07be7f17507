#include "edge2vec/walker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edge2vec {

void WalkParams::validate() const {
  if (p <= 0.0 || q <= 0.0) throw std::invalid_argument("walk params p and q must be > 0");
  if (walk_length < 2) throw std::invalid_argument("walk length must be >= 2");
  if (walks_per_node < 1) throw std::invalid_argument("walks per node must be >= 1");
}

double distance_bias(double p, double q, int hop_distance) {
  if (p <= 0.0 || q <= 0.0) throw std::invalid_argument("p and q must be > 0");
  switch (hop_distance) {
    case 0: return 1.0 / p;
    case 1: return 1.0;
    case 2: return 1.0 / q;
    default: throw std::invalid_argument("hop distance must be 0, 1 or 2");
  }
}

namespace {

// Unnormalized candidate scores for neighbors(curr), shared by the
// distribution and the sampler.
void score_candidates(const HetGraph& graph, const TransitionMatrix& m, NodeIndex prev,
                      NodeIndex curr, EdgeTypeIndex prev_etype, const WalkParams& params,
                      std::span<const NeighborEntry> nbrs, std::vector<double>& scores) {
  scores.resize(nbrs.size());
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    const NeighborEntry& cand = nbrs[i];
    int d;
    if (cand.node == prev) {
      d = 0;
    } else if (graph.has_edge(prev, cand.node)) {
      d = 1;
    } else {
      d = 2;
    }
    scores[i] = cand.weight * m.at(prev_etype, cand.etype) * distance_bias(params.p, params.q, d);
  }
}

// Cumulative-sum inversion over nonnegative scores; exact zeros can never be
// drawn. Returns the candidate index, or npos when all scores are zero.
constexpr std::size_t kNoCandidate = static_cast<std::size_t>(-1);

std::size_t sample_index(std::span<const double> scores, Rng& rng) {
  double total = 0.0;
  for (double s : scores) total += s;
  if (!(total > 0.0)) return kNoCandidate;
  double target = rng.next_double() * total;
  double acc = 0.0;
  std::size_t last_positive = kNoCandidate;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] <= 0.0) continue;
    acc += scores[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;  // rounding pushed target past the final sum
}

}  // namespace

std::vector<double> step_distribution(const HetGraph& graph, const TransitionMatrix& m,
                                      NodeIndex prev, NodeIndex curr,
                                      EdgeTypeIndex prev_etype, const WalkParams& params) {
  params.validate();
  if (m.size != graph.edge_type_count()) {
    throw std::invalid_argument("transition matrix size does not match edge-type count");
  }
  if (prev_etype >= m.size) throw std::out_of_range("prev edge type out of range");
  auto nbrs = graph.neighbors(curr);
  if (nbrs.empty()) throw DeadEnd("node " + std::to_string(curr) + " has no neighbors");

  std::vector<double> scores;
  score_candidates(graph, m, prev, curr, prev_etype, params, nbrs, scores);
  double total = 0.0;
  for (double s : scores) total += s;
  if (!(total > 0.0)) throw DeadEnd("all candidate scores are zero");
  for (double& s : scores) s /= total;
  return scores;
}

std::pair<std::vector<NodeIndex>, std::vector<EdgeTypeIndex>> hetero_random_walk(
    const HetGraph& graph, const TransitionMatrix& m, NodeIndex start,
    const WalkParams& params, Rng& rng) {
  params.validate();
  if (start >= graph.node_count()) throw std::out_of_range("start node out of range");

  std::vector<NodeIndex> nodes;
  std::vector<EdgeTypeIndex> etypes;
  nodes.reserve(params.walk_length);
  etypes.reserve(params.walk_length - 1);
  nodes.push_back(start);

  std::vector<double> scores;
  while (nodes.size() < static_cast<std::size_t>(params.walk_length)) {
    NodeIndex curr = nodes.back();
    auto nbrs = graph.neighbors(curr);
    if (nbrs.empty()) break;  // dead end, keep the truncated walk

    std::size_t pick;
    if (nodes.size() == 1) {
      // first hop: raw edge weight only
      scores.resize(nbrs.size());
      for (std::size_t i = 0; i < nbrs.size(); ++i) scores[i] = nbrs[i].weight;
      pick = sample_index(scores, rng);
    } else {
      NodeIndex prev = nodes[nodes.size() - 2];
      score_candidates(graph, m, prev, curr, etypes.back(), params, nbrs, scores);
      pick = sample_index(scores, rng);
    }
    if (pick == kNoCandidate) break;
    nodes.push_back(nbrs[pick].node);
    etypes.push_back(nbrs[pick].etype);
  }
  return {std::move(nodes), std::move(etypes)};
}

WalkCorpus generate_corpus(const HetGraph& graph, const TransitionMatrix& m,
                           std::span<const NodeIndex> start_nodes, const WalkParams& params,
                           std::uint64_t seed, int threads) {
  params.validate();
  if (start_nodes.empty()) throw std::invalid_argument("start_nodes must be non-empty");
  if (m.size != graph.edge_type_count()) {
    throw std::invalid_argument("transition matrix size does not match edge-type count");
  }

  // deterministic emission order: (node index, walk index)
  std::vector<NodeIndex> starts(start_nodes.begin(), start_nodes.end());
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  for (NodeIndex v : starts) {
    if (v >= graph.node_count()) throw std::out_of_range("start node out of range");
  }

  const int r = params.walks_per_node;
  const std::size_t total = starts.size() * static_cast<std::size_t>(r);
  WalkCorpus corpus;
  corpus.node_walks.resize(total);
  corpus.edge_walks.resize(total);

  const std::int64_t n = static_cast<std::int64_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads > 0 ? threads : 1) \
    if (threads > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) {
      Rng rng(stream_seed(seed, starts[i], static_cast<std::uint64_t>(j)));
      auto [nodes, etypes] = hetero_random_walk(graph, m, starts[i], params, rng);
      const std::size_t slot = static_cast<std::size_t>(i) * r + j;
      corpus.node_walks[slot] = std::move(nodes);
      corpus.edge_walks[slot] = std::move(etypes);
    }
  }
  return corpus;
}

}  // namespace edge2vec
