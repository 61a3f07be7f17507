// Times the OpenMP kernels against their serial reference paths on a planted
// heterograph: corpus generation (thread-count-invariant output) and
// skip-gram training (deterministic serial vs lock-free parallel).

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "edge2vec/skipgram.hpp"
#include "edge2vec/synthetic.hpp"
#include "edge2vec/transition.hpp"
#include "edge2vec/walker.hpp"

using namespace edge2vec;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  int threads =
#ifdef _OPENMP
      omp_get_max_threads();
#else
      1;
#endif
  if (argc > 1) threads = std::atoi(argv[1]);
  if (threads < 1) threads = 1;

  PlantedGraph planted = make_planted_graph(3, 300, 0.05, 0.005, 0);
  HetGraph graph = build_graph(planted.records, true);
  std::printf("graph: %zu nodes, %zu edges, %zu edge types\n", graph.node_count(),
              graph.edge_count(), graph.edge_type_count());

  TransitionMatrix uniform = TransitionMatrix::ones(graph.edge_type_labels());
  WalkParams wp;
  wp.walks_per_node = 10;
  std::vector<NodeIndex> starts(graph.node_count());
  for (NodeIndex v = 0; v < graph.node_count(); ++v) starts[v] = v;

  auto t0 = std::chrono::steady_clock::now();
  WalkCorpus corpus_serial = generate_corpus(graph, uniform, starts, wp, 0, 1);
  const double walk_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  WalkCorpus corpus_parallel = generate_corpus(graph, uniform, starts, wp, 0, threads);
  const double walk_parallel = seconds_since(t0);

  const bool identical = corpus_serial.node_walks == corpus_parallel.node_walks &&
                         corpus_serial.edge_walks == corpus_parallel.edge_walks;
  std::printf("corpus  serial      %7.3fs\n", walk_serial);
  std::printf("corpus  omp x%-2d     %7.3fs  speedup %.2fx  output %s\n", threads, walk_parallel,
              walk_serial / walk_parallel, identical ? "identical" : "DIFFERS");

  TrainParams tp;
  tp.dim = 64;
  tp.epochs = 1;
  tp.mode = TrainMode::kDeterministic;
  t0 = std::chrono::steady_clock::now();
  EmbeddingMatrix emb_serial = train_embeddings(corpus_serial, graph.node_count(), tp, 0);
  const double train_serial = seconds_since(t0);

  tp.mode = TrainMode::kParallel;
  tp.threads = threads;
  t0 = std::chrono::steady_clock::now();
  EmbeddingMatrix emb_parallel = train_embeddings(corpus_serial, graph.node_count(), tp, 0);
  const double train_parallel = seconds_since(t0);
  (void)emb_serial;
  (void)emb_parallel;

  std::printf("embed   serial      %7.3fs\n", train_serial);
  std::printf("embed   omp x%-2d     %7.3fs  speedup %.2fx\n", threads, train_parallel,
              train_serial / train_parallel);
  return 0;
}
