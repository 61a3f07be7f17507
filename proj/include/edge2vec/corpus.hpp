#pragma once

#include <cstdint>
#include <vector>

#include "edge2vec/graph.hpp"

namespace edge2vec {

struct WalkParams {
  double p = 0.25;          // return parameter, biases hop distance 0
  double q = 0.25;          // in-out parameter, biases hop distance 2
  int walk_length = 50;     // >= 2
  int walks_per_node = 1;   // >= 1

  void validate() const;
};

// Parallel node and edge-type sequences; edge_walks[i] is one element
// shorter than node_walks[i].
struct WalkCorpus {
  std::vector<std::vector<NodeIndex>> node_walks;
  std::vector<std::vector<EdgeTypeIndex>> edge_walks;

  std::size_t size() const { return node_walks.size(); }
  bool empty() const { return node_walks.empty(); }
};

}  // namespace edge2vec
