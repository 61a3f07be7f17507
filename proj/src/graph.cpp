#include "edge2vec/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <regex>
#include <tuple>

namespace edge2vec {

namespace {

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

double parse_weight(const std::string& field, std::size_t line_no) {
  double w = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, w);
  if (ec != std::errc() || ptr != last || !std::isfinite(w)) {
    throw ParseError(line_no, "bad weight '" + field + "'");
  }
  if (w <= 0.0) throw ParseError(line_no, "weight must be > 0, got '" + field + "'");
  return w;
}

std::vector<std::string> split_tab(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

// Last path segment of a URI-like token, with optional <> brackets removed.
std::string last_segment(std::string token) {
  if (!token.empty() && token.front() == '<') token.erase(0, 1);
  if (!token.empty() && token.back() == '>') token.pop_back();
  std::size_t slash = token.find_last_of('/');
  if (slash == std::string::npos) return token;
  return token.substr(slash + 1);
}

}  // namespace

std::vector<RawEdge> parse_edge_list(std::istream& in, bool has_weight) {
  std::vector<RawEdge> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = split_tab(line);
    if (fields.size() < 3) throw ParseError(line_no, "expected 3 or 4 tab-separated fields");
    if (fields.size() > 4 || (fields.size() == 4 && !has_weight)) {
      throw ParseError(line_no, "too many fields");
    }
    for (int i = 0; i < 3; ++i) {
      if (fields[i].empty()) throw ParseError(line_no, "empty field");
    }
    RawEdge rec;
    rec.src = fields[0];
    rec.etype = fields[1];
    rec.dst = fields[2];
    rec.weight = fields.size() == 4 ? parse_weight(fields[3], line_no) : 1.0;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<RawEdge> parse_triples(std::istream& in, const std::string& type_rule) {
  std::regex rule(type_rule);
  auto node_type = [&](const std::string& token) -> std::string {
    std::smatch m;
    if (std::regex_match(token, m, rule) && m.size() >= 2) return m[1].str();
    return "unknown";
  };

  std::vector<RawEdge> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      tokens.push_back(line.substr(pos, end - pos));
      pos = end;
    }
    if (tokens.empty()) continue;
    if (tokens.size() != 3) throw ParseError(line_no, "expected 3 tokens, got " + std::to_string(tokens.size()));
    RawEdge rec;
    rec.src = last_segment(tokens[0]);
    rec.etype = last_segment(tokens[1]);
    rec.dst = last_segment(tokens[2]);
    rec.src_type = node_type(tokens[0]);
    rec.dst_type = node_type(tokens[2]);
    rec.weight = 1.0;
    records.push_back(std::move(rec));
  }
  return records;
}

HetGraph build_graph(std::span<const RawEdge> records, bool undirected) {
  std::vector<std::string> node_labels, node_types, etype_labels;
  std::unordered_map<std::string, NodeIndex> node_index;
  std::unordered_map<std::string, EdgeTypeIndex> etype_index;

  auto intern_node = [&](const std::string& label, const std::string& type) {
    auto it = node_index.find(label);
    if (it != node_index.end()) {
      if (node_types[it->second].empty() && !type.empty()) node_types[it->second] = type;
      return it->second;
    }
    NodeIndex idx = static_cast<NodeIndex>(node_labels.size());
    node_index.emplace(label, idx);
    node_labels.push_back(label);
    node_types.push_back(type);
    return idx;
  };
  auto intern_etype = [&](const std::string& label) {
    auto it = etype_index.find(label);
    if (it != etype_index.end()) return it->second;
    EdgeTypeIndex idx = static_cast<EdgeTypeIndex>(etype_labels.size());
    etype_index.emplace(label, idx);
    etype_labels.push_back(label);
    return idx;
  };

  std::size_t dropped = 0;
  // key (src,dst,etype); undirected edges keyed with endpoints in index order
  std::map<std::tuple<NodeIndex, NodeIndex, EdgeTypeIndex>, double> merged;
  for (const RawEdge& rec : records) {
    NodeIndex s = intern_node(rec.src, rec.src_type);
    NodeIndex d = intern_node(rec.dst, rec.dst_type);
    EdgeTypeIndex t = intern_etype(rec.etype);
    if (s == d) {
      ++dropped;
      continue;
    }
    NodeIndex a = s, b = d;
    if (undirected && a > b) std::swap(a, b);
    merged[{a, b, t}] += rec.weight;
  }
  if (merged.empty()) {
    throw std::invalid_argument("no edges survive ingestion (" + std::to_string(dropped) +
                                " self-loops dropped)");
  }

  std::vector<std::tuple<NodeIndex, NodeIndex, EdgeTypeIndex, double>> edges;
  edges.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    edges.emplace_back(std::get<0>(key), std::get<1>(key), std::get<2>(key), w);
  }
  return HetGraph(std::move(node_labels), std::move(node_types), std::move(etype_labels),
                  edges, undirected, dropped);
}

HetGraph::HetGraph(std::vector<std::string> node_labels, std::vector<std::string> node_types,
                   std::vector<std::string> etype_labels,
                   const std::vector<std::tuple<NodeIndex, NodeIndex, EdgeTypeIndex, double>>& edges,
                   bool undirected, std::size_t dropped_self_loops)
    : node_labels_(std::move(node_labels)),
      node_types_(std::move(node_types)),
      etype_labels_(std::move(etype_labels)),
      edge_count_(edges.size()),
      dropped_self_loops_(dropped_self_loops),
      undirected_(undirected) {
  if (node_types_.size() != node_labels_.size()) {
    throw std::invalid_argument("node_types size mismatch");
  }
  node_index_.reserve(node_labels_.size());
  for (NodeIndex i = 0; i < node_labels_.size(); ++i) node_index_.emplace(node_labels_[i], i);
  if (node_index_.size() != node_labels_.size()) {
    throw std::invalid_argument("duplicate node label");
  }
  for (EdgeTypeIndex i = 0; i < etype_labels_.size(); ++i) etype_index_.emplace(etype_labels_[i], i);
  if (etype_index_.size() != etype_labels_.size()) {
    throw std::invalid_argument("duplicate edge-type label");
  }

  const std::size_t n = node_labels_.size();
  std::vector<std::size_t> degree(n, 0);
  for (const auto& [s, d, t, w] : edges) {
    if (s >= n || d >= n || t >= etype_labels_.size()) {
      throw std::invalid_argument("edge references unknown vocabulary index");
    }
    if (w <= 0.0) throw std::invalid_argument("edge weight must be > 0");
    ++degree[s];
    if (undirected_) ++degree[d];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adj_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [s, d, t, w] : edges) {
    adj_[cursor[s]++] = NeighborEntry{d, t, w};
    if (undirected_) adj_[cursor[d]++] = NeighborEntry{s, t, w};
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adj_.begin() + offsets_[v], adj_.begin() + offsets_[v + 1],
              [](const NeighborEntry& a, const NeighborEntry& b) {
                return a.node != b.node ? a.node < b.node : a.etype < b.etype;
              });
  }
}

std::optional<NodeIndex> HetGraph::find_node(const std::string& label) const {
  auto it = node_index_.find(label);
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeTypeIndex> HetGraph::find_edge_type(const std::string& label) const {
  auto it = etype_index_.find(label);
  if (it == etype_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const NeighborEntry> HetGraph::neighbors(NodeIndex v) const {
  if (v >= node_count()) {
    throw std::out_of_range("node index " + std::to_string(v) + " out of range");
  }
  return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool HetGraph::has_edge(NodeIndex u, NodeIndex v) const {
  auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                             [](const NeighborEntry& e, NodeIndex x) { return e.node < x; });
  return it != nbrs.end() && it->node == v;
}

GraphStats HetGraph::stats() const {
  GraphStats s;
  s.nodes = node_count();
  s.edges = edge_count_;
  s.dropped_self_loops = dropped_self_loops_;
  std::map<std::string, std::size_t> by_node_type;
  for (const std::string& t : node_types_) {
    if (!t.empty()) ++by_node_type[t];
  }
  s.node_type_counts.assign(by_node_type.begin(), by_node_type.end());
  std::vector<std::size_t> by_etype(edge_type_count(), 0);
  for (const NeighborEntry& e : adj_) ++by_etype[e.etype];
  for (EdgeTypeIndex t = 0; t < edge_type_count(); ++t) {
    // every undirected edge contributed two adjacency entries
    s.edge_type_counts.emplace_back(etype_labels_[t], undirected_ ? by_etype[t] / 2 : by_etype[t]);
  }
  return s;
}

void serialize_edge_list(const HetGraph& g, std::ostream& out) {
  char buf[64];
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    for (const NeighborEntry& e : g.neighbors(v)) {
      if (g.undirected() && e.node < v) continue;  // emit each undirected edge once
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), e.weight);
      out << g.node_label(v) << '\t' << g.edge_type_label(e.etype) << '\t'
          << g.node_label(e.node) << '\t' << std::string_view(buf, ptr - buf) << '\n';
    }
  }
}

}  // namespace edge2vec
