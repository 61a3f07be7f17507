#include "edge2vec/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace edge2vec::io {

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::string shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

double parse_double(const std::string& s, const fs::path& path) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error(path.string() + ": bad number '" + s + "'");
  }
  return x;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

}  // namespace

void write_graph_snapshot(const HetGraph& g, const fs::path& dir) {
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "graph.edges.tsv");
    serialize_edge_list(g, out);
  }
  {
    auto out = open_out(dir / "graph.nodes.tsv");
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      out << v << '\t' << g.node_label(v) << '\t' << g.node_type(v) << '\n';
    }
  }
  {
    auto out = open_out(dir / "graph.etypes.tsv");
    for (EdgeTypeIndex t = 0; t < g.edge_type_count(); ++t) {
      out << t << '\t' << g.edge_type_label(t) << '\n';
    }
  }
  {
    auto out = open_out(dir / "graph.meta.tsv");
    out << "directedness\t" << (g.undirected() ? "undirected" : "directed") << '\n';
    out << "dropped_self_loops\t" << g.dropped_self_loops() << '\n';
  }
}

HetGraph load_graph_snapshot(const fs::path& dir) {
  std::vector<std::string> node_labels, node_types, etype_labels;
  {
    auto in = open_in(dir / "graph.nodes.tsv");
    std::string line;
    while (std::getline(in, line)) {
      strip_cr(line);
      if (line.empty()) continue;
      auto fields = split(line, '\t');
      if (fields.size() != 3) throw std::runtime_error("malformed graph.nodes.tsv");
      node_labels.push_back(fields[1]);
      node_types.push_back(fields[2]);
    }
  }
  {
    auto in = open_in(dir / "graph.etypes.tsv");
    std::string line;
    while (std::getline(in, line)) {
      strip_cr(line);
      if (line.empty()) continue;
      auto fields = split(line, '\t');
      if (fields.size() != 2) throw std::runtime_error("malformed graph.etypes.tsv");
      etype_labels.push_back(fields[1]);
    }
  }
  bool undirected = true;
  std::size_t dropped = 0;
  {
    auto in = open_in(dir / "graph.meta.tsv");
    std::string line;
    while (std::getline(in, line)) {
      strip_cr(line);
      auto fields = split(line, '\t');
      if (fields.size() != 2) continue;
      if (fields[0] == "directedness") undirected = fields[1] == "undirected";
      if (fields[0] == "dropped_self_loops") dropped = std::stoull(fields[1]);
    }
  }

  std::unordered_map<std::string, NodeIndex> node_index;
  for (NodeIndex i = 0; i < node_labels.size(); ++i) node_index.emplace(node_labels[i], i);
  std::unordered_map<std::string, EdgeTypeIndex> etype_index;
  for (EdgeTypeIndex i = 0; i < etype_labels.size(); ++i) etype_index.emplace(etype_labels[i], i);

  std::vector<std::tuple<NodeIndex, NodeIndex, EdgeTypeIndex, double>> edges;
  auto in = open_in(dir / "graph.edges.tsv");
  for (const RawEdge& rec : parse_edge_list(in, true)) {
    auto s = node_index.find(rec.src);
    auto d = node_index.find(rec.dst);
    auto t = etype_index.find(rec.etype);
    if (s == node_index.end() || d == node_index.end() || t == etype_index.end()) {
      throw std::runtime_error("graph snapshot edge references unknown vocabulary entry");
    }
    edges.emplace_back(s->second, d->second, t->second, rec.weight);
  }
  return HetGraph(std::move(node_labels), std::move(node_types), std::move(etype_labels), edges,
                  undirected, dropped);
}

void write_stats(const GraphStats& stats, const fs::path& path) {
  auto out = open_out(path);
  out << "nodes\t" << stats.nodes << '\n';
  out << "edges\t" << stats.edges << '\n';
  out << "dropped_self_loops\t" << stats.dropped_self_loops << '\n';
  for (const auto& [name, count] : stats.node_type_counts) {
    out << "node_type:" << name << '\t' << count << '\n';
  }
  for (const auto& [name, count] : stats.edge_type_counts) {
    out << "edge_type:" << name << '\t' << count << '\n';
  }
}

void write_matrix(const TransitionMatrix& m, const fs::path& path) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < m.size; ++j) out << (j ? "\t" : "") << m.labels[j];
  out << '\n';
  for (std::size_t i = 0; i < m.size; ++i) {
    out << m.labels[i];
    for (std::size_t j = 0; j < m.size; ++j) out << '\t' << shortest(m.at(i, j));
    out << '\n';
  }
}

TransitionMatrix load_matrix(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty matrix file");
  strip_cr(line);
  TransitionMatrix m;
  m.labels = split(line, '\t');
  m.size = m.labels.size();
  m.values.assign(m.size * m.size, 0.0);
  for (std::size_t i = 0; i < m.size; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": truncated matrix");
    strip_cr(line);
    auto fields = split(line, '\t');
    if (fields.size() != m.size + 1 || fields[0] != m.labels[i]) {
      throw std::runtime_error(path.string() + ": malformed matrix row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < m.size; ++j) m.at(i, j) = parse_double(fields[j + 1], path);
  }
  return m;
}

void write_iteration_log(const std::vector<double>& changes, const fs::path& path) {
  auto out = open_out(path);
  out << "iteration\tmax_abs_change\n";
  for (std::size_t i = 0; i < changes.size(); ++i) {
    out << (i + 1) << '\t' << shortest(changes[i]) << '\n';
  }
}

void write_corpus(const WalkCorpus& corpus, const HetGraph& g, const fs::path& walks_path,
                  const fs::path& etypes_path) {
  auto walks = open_out(walks_path);
  auto etypes = open_out(etypes_path);
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    const auto& nodes = corpus.node_walks[w];
    const auto& types = corpus.edge_walks[w];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      walks << (i ? " " : "") << g.node_label(nodes[i]);
    }
    walks << '\n';
    for (std::size_t i = 0; i < types.size(); ++i) {
      etypes << (i ? " " : "") << g.edge_type_label(types[i]);
    }
    etypes << '\n';
  }
}

WalkCorpus load_corpus(const fs::path& walks_path, const fs::path& etypes_path,
                       const HetGraph& g) {
  WalkCorpus corpus;
  auto walks = open_in(walks_path);
  std::string line;
  while (std::getline(walks, line)) {
    strip_cr(line);
    std::vector<NodeIndex> walk;
    std::istringstream ss(line);
    std::string token;
    while (ss >> token) {
      auto v = g.find_node(token);
      if (!v) throw std::runtime_error("corpus node '" + token + "' not in graph vocabulary");
      walk.push_back(*v);
    }
    if (walk.empty()) throw std::runtime_error("empty walk line in corpus");
    corpus.node_walks.push_back(std::move(walk));
  }
  auto etypes = open_in(etypes_path);
  while (std::getline(etypes, line)) {
    strip_cr(line);
    std::vector<EdgeTypeIndex> walk;
    std::istringstream ss(line);
    std::string token;
    while (ss >> token) {
      auto t = g.find_edge_type(token);
      if (!t) throw std::runtime_error("corpus edge type '" + token + "' not in graph vocabulary");
      walk.push_back(*t);
    }
    corpus.edge_walks.push_back(std::move(walk));
  }
  if (corpus.edge_walks.size() != corpus.node_walks.size()) {
    throw std::runtime_error("corpus and .etypes files have different walk counts");
  }
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    if (corpus.edge_walks[w].size() + 1 != corpus.node_walks[w].size()) {
      throw std::runtime_error("walk " + std::to_string(w) +
                               ": edge-type sequence length mismatch");
    }
  }
  return corpus;
}

void write_embeddings(const EmbeddingMatrix& emb, const std::vector<std::string>& labels,
                      const fs::path& path) {
  if (labels.size() != emb.nodes) throw std::invalid_argument("label count mismatch");
  auto out = open_out(path);
  out << emb.nodes << ' ' << emb.dim << '\n';
  char buf[32];
  for (std::size_t i = 0; i < emb.nodes; ++i) {
    out << labels[i];
    auto row = emb.row(i);
    for (double x : row) {
      std::snprintf(buf, sizeof(buf), " %.6f", x);
      out << buf;
    }
    out << '\n';
  }
}

EmbeddingTable load_embeddings(const fs::path& path) {
  auto in = open_in(path);
  std::size_t n = 0, d = 0;
  if (!(in >> n >> d) || n == 0 || d == 0) {
    throw std::runtime_error(path.string() + ": bad embedding header");
  }
  EmbeddingTable table;
  table.labels.resize(n);
  table.vectors.nodes = n;
  table.vectors.dim = d;
  table.vectors.data.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> table.labels[i])) throw std::runtime_error(path.string() + ": truncated");
    for (std::size_t j = 0; j < d; ++j) {
      if (!(in >> table.vectors.data[i * d + j])) {
        throw std::runtime_error(path.string() + ": truncated at row " + std::to_string(i));
      }
    }
  }
  table.rebuild_index();
  return table;
}

LabelFile load_labels(const fs::path& path) {
  LabelFile out;
  std::unordered_map<std::string, int> class_index;
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected node<TAB>class");
    }
    out.nodes.push_back(fields[0]);
    auto [it, inserted] = class_index.emplace(fields[1], static_cast<int>(out.class_names.size()));
    if (inserted) out.class_names.push_back(fields[1]);
    out.labels.push_back(it->second);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> load_pairs(const fs::path& path) {
  std::vector<std::pair<std::string, std::string>> out;
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected nodeA<TAB>nodeB");
    }
    out.emplace_back(fields[0], fields[1]);
  }
  return out;
}

QueryFile load_queries(const fs::path& path) {
  QueryFile out;
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    out.queries.push_back(fields[0]);
    out.relevant.emplace_back(fields.begin() + 1, fields.end());
  }
  return out;
}

std::uint64_t file_checksum(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace edge2vec::io
