#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edge2vec/graph.hpp"

namespace edge2vec {

// Planted heterograph used by the acceptance benchmark and the performance
// harness: `groups` node types of `group_size` nodes each. Edges inside a
// group carry that group's own edge type; edges across groups share one
// extra type. Node types are recoverable from structure, which gives the
// classification tasks a known answer.
struct PlantedGraph {
  std::vector<RawEdge> records;
  std::vector<std::string> node_labels;      // all generated nodes
  std::vector<std::string> node_classes;     // class label per node
};

PlantedGraph make_planted_graph(int groups, int group_size, double intra_prob,
                                double cross_prob, std::uint64_t seed);

}  // namespace edge2vec
