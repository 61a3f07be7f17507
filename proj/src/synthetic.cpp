#include "edge2vec/synthetic.hpp"

#include <cstdio>

#include "edge2vec/rng.hpp"

namespace edge2vec {

PlantedGraph make_planted_graph(int groups, int group_size, double intra_prob,
                                double cross_prob, std::uint64_t seed) {
  PlantedGraph g;
  const int n = groups * group_size;
  g.node_labels.reserve(n);
  g.node_classes.reserve(n);
  char buf[32];
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "n%04d", i);
    g.node_labels.emplace_back(buf);
    g.node_classes.push_back(std::string("class") + static_cast<char>('A' + i / group_size));
  }

  Rng rng(mix_seed(seed, "planted"));
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const int gu = u / group_size, gv = v / group_size;
      const double prob = gu == gv ? intra_prob : cross_prob;
      if (rng.next_double() >= prob) continue;
      RawEdge rec;
      rec.src = g.node_labels[u];
      rec.dst = g.node_labels[v];
      rec.etype = gu == gv ? std::string("rel") + static_cast<char>('A' + gu) : "cross";
      rec.weight = 1.0;
      rec.src_type = g.node_classes[u];
      rec.dst_type = g.node_classes[v];
      g.records.push_back(std::move(rec));
    }
  }
  return g;
}

}  // namespace edge2vec
