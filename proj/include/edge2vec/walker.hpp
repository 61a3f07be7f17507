#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "edge2vec/corpus.hpp"
#include "edge2vec/graph.hpp"
#include "edge2vec/rng.hpp"
#include "edge2vec/transition.hpp"

namespace edge2vec {

// node2vec distance bias: 1/p at hop distance 0 (return), 1 at distance 1,
// 1/q at distance 2. Other distances are invalid.
double distance_bias(double p, double q, int hop_distance);

// Next-step distribution over neighbors(curr) given the edge type just
// traversed: score(k) = weight(curr,k) * M[prev_etype][etype(curr,k)] *
// distance_bias, normalized to sum 1. Parallel edges are distinct candidates.
// Throws DeadEnd if curr has no neighbors.
struct DeadEnd : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> step_distribution(const HetGraph& graph, const TransitionMatrix& m,
                                      NodeIndex prev, NodeIndex curr,
                                      EdgeTypeIndex prev_etype, const WalkParams& params);

// One walk from `start`: the first hop is sampled by raw edge weight, later
// hops by step_distribution; truncates at dead ends. Returns the node
// sequence and the parallel edge-type sequence (one shorter).
std::pair<std::vector<NodeIndex>, std::vector<EdgeTypeIndex>> hetero_random_walk(
    const HetGraph& graph, const TransitionMatrix& m, NodeIndex start,
    const WalkParams& params, Rng& rng);

// walks_per_node walks from every start node, emitted in (node, walk) order.
// Each walk owns the RNG stream derived from (seed, node, walk), so the
// output is a pure function of the arguments regardless of thread count.
WalkCorpus generate_corpus(const HetGraph& graph, const TransitionMatrix& m,
                           std::span<const NodeIndex> start_nodes, const WalkParams& params,
                           std::uint64_t seed, int threads = 1);

}  // namespace edge2vec
