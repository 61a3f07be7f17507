#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace edge2vec {

using NodeIndex = std::uint32_t;
using EdgeTypeIndex = std::uint32_t;

// Record as read from an input file, before vocabulary assignment.
struct RawEdge {
  std::string src;
  std::string etype;
  std::string dst;
  double weight = 1.0;
  std::string src_type;  // optional node-type label, empty = none
  std::string dst_type;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

// One adjacency entry. Parallel edges between the same node pair appear as
// separate entries with distinct etype; lists are sorted by (node, etype).
struct NeighborEntry {
  NodeIndex node;
  EdgeTypeIndex etype;
  double weight;
};

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;  // undirected edges counted once
  std::size_t dropped_self_loops = 0;
  std::vector<std::pair<std::string, std::size_t>> node_type_counts;
  std::vector<std::pair<std::string, std::size_t>> edge_type_counts;
};

// Immutable heterogeneous graph: dense node/edge-type vocabularies plus a
// CSR adjacency. Safe for shared concurrent reads after construction.
class HetGraph {
 public:
  HetGraph(std::vector<std::string> node_labels, std::vector<std::string> node_types,
           std::vector<std::string> etype_labels,
           const std::vector<std::tuple<NodeIndex, NodeIndex, EdgeTypeIndex, double>>& edges,
           bool undirected, std::size_t dropped_self_loops);

  std::size_t node_count() const { return node_labels_.size(); }
  std::size_t edge_type_count() const { return etype_labels_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool undirected() const { return undirected_; }
  std::size_t dropped_self_loops() const { return dropped_self_loops_; }

  const std::string& node_label(NodeIndex v) const { return node_labels_.at(v); }
  const std::string& node_type(NodeIndex v) const { return node_types_.at(v); }
  const std::string& edge_type_label(EdgeTypeIndex t) const { return etype_labels_.at(t); }
  const std::vector<std::string>& edge_type_labels() const { return etype_labels_; }

  std::optional<NodeIndex> find_node(const std::string& label) const;
  std::optional<EdgeTypeIndex> find_edge_type(const std::string& label) const;

  // Full typed neighbor list of v, sorted by (neighbor, etype).
  std::span<const NeighborEntry> neighbors(NodeIndex v) const;

  // True iff some edge u->v exists (any type). Binary search, O(log deg u).
  bool has_edge(NodeIndex u, NodeIndex v) const;

  GraphStats stats() const;

 private:
  std::vector<std::string> node_labels_;
  std::vector<std::string> node_types_;
  std::vector<std::string> etype_labels_;
  std::unordered_map<std::string, NodeIndex> node_index_;
  std::unordered_map<std::string, EdgeTypeIndex> etype_index_;
  std::vector<std::size_t> offsets_;  // CSR: adjacency of v is adj_[offsets_[v]..offsets_[v+1])
  std::vector<NeighborEntry> adj_;
  std::size_t edge_count_ = 0;
  std::size_t dropped_self_loops_ = 0;
  bool undirected_ = true;
};

// Parses TSV lines `src<TAB>etype<TAB>dst[<TAB>weight]`. `#`-prefixed and
// blank lines are skipped. With has_weight=false a fourth column is an error
// and every weight is 1.0.
std::vector<RawEdge> parse_edge_list(std::istream& in, bool has_weight = true);

// Parses lines of 3 whitespace-separated URI-like tokens
// (subject predicate object). Node and edge labels are the last path segment
// of the token; node types come from applying `type_rule` (a regex with one
// capture group) to the full token, "unknown" when it does not match.
std::vector<RawEdge> parse_triples(std::istream& in, const std::string& type_rule);

// Default type_rule: captures the second-to-last path segment.
inline constexpr const char* kDefaultTypeRule = ".*/([^/]+)/[^/>]+>?$";

// Builds the graph: vocabularies in first-appearance order, duplicate
// (src,dst,etype) weights summed, self-loops dropped and counted, undirected
// mode mirrors every edge. Throws std::invalid_argument if no edge survives.
HetGraph build_graph(std::span<const RawEdge> records, bool undirected = true);

// Canonical TSV form consumed by parse_edge_list; undirected edges emitted
// once with endpoints in index order.
void serialize_edge_list(const HetGraph& g, std::ostream& out);

}  // namespace edge2vec
