#include "edge2vec/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "edge2vec/io.hpp"
#include "edge2vec/rng.hpp"
#include "edge2vec/walker.hpp"

namespace edge2vec {

namespace fs = std::filesystem;
using nlohmann::json;

int PipelineConfig::resolved_threads() const {
  if (threads > 0) return threads;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
#endif
}

namespace {

class StageTimer {
 public:
  explicit StageTimer(std::string name) : record_{std::move(name)} {}
  StageRecord finish(std::initializer_list<const char*> artifacts) {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    record_.seconds = std::chrono::duration<double>(elapsed).count();
    for (const char* a : artifacts) record_.artifacts.emplace_back(a);
    return std::move(record_);
  }

 private:
  StageRecord record_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

HetGraph load_graph(const PipelineConfig& cfg) { return io::load_graph_snapshot(cfg.out_dir); }

TransitionMatrix matrix_for_walks(const PipelineConfig& cfg, const HetGraph& graph) {
  if (cfg.uniform_matrix) return TransitionMatrix::ones(graph.edge_type_labels());
  TransitionMatrix m = io::load_matrix(cfg.out_dir / artifact::kMatrix);
  if (m.labels != graph.edge_type_labels()) {
    throw std::runtime_error("transition matrix edge types do not match the graph");
  }
  return m;
}

std::vector<std::string> embedding_labels(const HetGraph& graph) {
  std::vector<std::string> labels;
  labels.reserve(graph.node_count());
  for (NodeIndex v = 0; v < graph.node_count(); ++v) labels.push_back(graph.node_label(v));
  return labels;
}

void write_report(const fs::path& path, const std::vector<std::pair<std::string, double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  char buf[32];
  for (const auto& [key, value] : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    out << key << '\t' << buf << '\n';
  }
}

}  // namespace

StageRecord cmd_ingest(const PipelineConfig& cfg) {
  StageTimer timer("ingest");
  std::ifstream in(cfg.input);
  if (!in) throw std::runtime_error("cannot open input " + cfg.input.string());
  std::vector<RawEdge> records;
  if (cfg.format == "edgelist") {
    records = parse_edge_list(in, cfg.weighted_input);
  } else if (cfg.format == "triples") {
    records = parse_triples(in, cfg.type_rule);
  } else {
    throw std::runtime_error("unknown input format '" + cfg.format + "'");
  }
  HetGraph graph = build_graph(records, cfg.undirected);
  io::write_graph_snapshot(graph, cfg.out_dir);
  io::write_stats(graph.stats(), cfg.out_dir / artifact::kStats);
  return timer.finish({artifact::kEdges, artifact::kNodes, artifact::kEtypes, artifact::kMeta,
                       artifact::kStats});
}

StageRecord cmd_matrix(const PipelineConfig& cfg) {
  StageTimer timer("matrix");
  HetGraph graph = load_graph(cfg);
  EmResult result = train_transition_matrix(graph, cfg.em, cfg.walk,
                                            mix_seed(cfg.seed, "matrix"),
                                            cfg.resolved_threads());
  io::write_matrix(result.matrix, cfg.out_dir / artifact::kMatrix);
  io::write_iteration_log(result.iteration_changes, cfg.out_dir / artifact::kIterations);
  return timer.finish({artifact::kMatrix, artifact::kIterations});
}

StageRecord cmd_walks(const PipelineConfig& cfg) {
  StageTimer timer("walks");
  HetGraph graph = load_graph(cfg);
  TransitionMatrix m = matrix_for_walks(cfg, graph);
  std::vector<NodeIndex> starts(graph.node_count());
  for (NodeIndex v = 0; v < graph.node_count(); ++v) starts[v] = v;
  WalkCorpus corpus = generate_corpus(graph, m, starts, cfg.walk, mix_seed(cfg.seed, "walks"),
                                      cfg.resolved_threads());
  io::write_corpus(corpus, graph, cfg.out_dir / artifact::kWalks,
                   cfg.out_dir / artifact::kWalkEtypes);
  return timer.finish({artifact::kWalks, artifact::kWalkEtypes});
}

StageRecord cmd_embed(const PipelineConfig& cfg) {
  StageTimer timer("embed");
  HetGraph graph = load_graph(cfg);
  WalkCorpus corpus = io::load_corpus(cfg.out_dir / artifact::kWalks,
                                      cfg.out_dir / artifact::kWalkEtypes, graph);
  TrainParams params = cfg.train;
  params.threads = cfg.resolved_threads();
  EmbeddingMatrix emb =
      train_embeddings(corpus, graph.node_count(), params, mix_seed(cfg.seed, "embed"));
  io::write_embeddings(emb, embedding_labels(graph), cfg.out_dir / artifact::kEmbeddings);
  return timer.finish({artifact::kEmbeddings});
}

namespace {

StageRecord eval_classify(const PipelineConfig& cfg) {
  StageTimer timer("eval-classify");
  EmbeddingTable table = io::load_embeddings(cfg.out_dir / artifact::kEmbeddings);
  io::LabelFile labels = io::load_labels(cfg.labels_file);
  if (labels.nodes.empty()) throw std::runtime_error("label file is empty");

  auto picked = balanced_sample(std::span<const int>(labels.labels), cfg.max_per_class,
                                mix_seed(cfg.seed, "classify"));
  std::vector<std::string> nodes;
  std::vector<int> y;
  for (std::size_t i : picked) {
    nodes.push_back(labels.nodes[i]);
    y.push_back(labels.labels[i]);
  }

  std::optional<HetGraph> graph;
  if (cfg.concat_edge_type_degrees) graph = load_graph(cfg);

  LabeledInstances data;
  data.count = nodes.size();
  data.classes = static_cast<int>(labels.class_names.size());
  data.labels = std::move(y);
  data.features = node_features(table, nodes, graph ? &*graph : nullptr,
                                cfg.concat_edge_type_degrees, &data.dim);

  LinearTrainConfig model_cfg;
  model_cfg.loss = LossKind::kHinge;
  model_cfg.seed = mix_seed(cfg.seed, "classify-model");
  CrossValidationResult cv = cross_validate(data, 10, model_cfg, mix_seed(cfg.seed, "classify-cv"));
  write_report(cfg.out_dir / "classify.tsv",
               {{"precision", cv.mean.precision},
                {"recall", cv.mean.recall},
                {"f1", cv.mean.f1},
                {"hamming", cv.mean.hamming},
                {"accuracy", cv.mean.accuracy}});
  return timer.finish({"classify.tsv"});
}

StageRecord eval_linkpred(const PipelineConfig& cfg) {
  StageTimer timer("eval-linkpred");
  EmbeddingTable table = io::load_embeddings(cfg.out_dir / artifact::kEmbeddings);
  auto positives = io::load_pairs(cfg.positives_file);
  auto negatives = io::load_pairs(cfg.negatives_file);
  if (positives.empty() || negatives.empty()) {
    throw std::runtime_error("need both positive and negative pair files");
  }

  LabeledInstances data;
  data.count = positives.size() + negatives.size();
  data.dim = table.vectors.dim;
  data.classes = 2;
  data.features.reserve(data.count * data.dim);
  for (const auto& [a, b] : positives) {
    auto f = pair_features(table, a, b);
    data.features.insert(data.features.end(), f.begin(), f.end());
    data.labels.push_back(1);
  }
  for (const auto& [a, b] : negatives) {
    auto f = pair_features(table, a, b);
    data.features.insert(data.features.end(), f.begin(), f.end());
    data.labels.push_back(0);
  }

  LinearTrainConfig model_cfg;
  model_cfg.seed = mix_seed(cfg.seed, "linkpred-model");
  LinkPredictionMetrics lp =
      evaluate_link_prediction(data, 10, model_cfg, mix_seed(cfg.seed, "linkpred-cv"));
  write_report(cfg.out_dir / "linkpred.tsv",
               {{"precision", lp.classification.precision},
                {"recall", lp.classification.recall},
                {"f1", lp.classification.f1},
                {"hamming", lp.classification.hamming},
                {"auroc", lp.auroc}});
  return timer.finish({"linkpred.tsv"});
}

StageRecord eval_rank(const PipelineConfig& cfg) {
  StageTimer timer("eval-rank");
  EmbeddingTable table = io::load_embeddings(cfg.out_dir / artifact::kEmbeddings);
  io::QueryFile queries = io::load_queries(cfg.queries_file);
  if (queries.queries.empty()) throw std::runtime_error("query file is empty");

  std::vector<RankedQuery> ranked;
  for (std::size_t i = 0; i < queries.queries.size(); ++i) {
    RankedQuery rq;
    rq.query = queries.queries[i];
    rq.relevant = queries.relevant[i];
    for (const ScoredNode& s : cosine_topk(table, rq.query, cfg.topk)) {
      rq.ranked.push_back(s.label);
    }
    ranked.push_back(std::move(rq));
  }
  const int cutoffs[] = {10, 100};
  RankingMetrics m = ranking_metrics(ranked, cutoffs);
  write_report(cfg.out_dir / "rank.tsv",
               {{"p_at_10", m.precision_at.at(10)},
                {"p_at_100", m.precision_at.at(100)},
                {"recall_at_10", m.recall_at.at(10)},
                {"recall_at_100", m.recall_at.at(100)},
                {"map", m.map},
                {"ndcg", m.ndcg},
                {"mrr", m.mrr}});

  std::ofstream detail(cfg.out_dir / "rank.detail.tsv");
  detail << "query\trank\tnode\trelevant\n";
  for (const RankedQuery& rq : ranked) {
    std::set<std::string> rel(rq.relevant.begin(), rq.relevant.end());
    for (std::size_t i = 0; i < rq.ranked.size(); ++i) {
      detail << rq.query << '\t' << (i + 1) << '\t' << rq.ranked[i] << '\t'
             << rel.count(rq.ranked[i]) << '\n';
    }
  }
  return timer.finish({"rank.tsv", "rank.detail.tsv"});
}

StageRecord eval_similar(const PipelineConfig& cfg) {
  StageTimer timer("eval-similar");
  EmbeddingTable table = io::load_embeddings(cfg.out_dir / artifact::kEmbeddings);
  io::QueryFile queries = io::load_queries(cfg.queries_file);
  if (queries.queries.empty()) throw std::runtime_error("query file is empty");

  std::ofstream out(cfg.out_dir / "similar.tsv");
  if (!out) throw std::runtime_error("cannot write similar.tsv");
  out << "query\trank\tnode\tcosine\n";
  char buf[32];
  for (const std::string& q : queries.queries) {
    auto top = cosine_topk(table, q, cfg.topk);
    for (std::size_t i = 0; i < top.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.6f", top[i].score);
      out << q << '\t' << (i + 1) << '\t' << top[i].label << '\t' << buf << '\n';
    }
  }
  return timer.finish({"similar.tsv"});
}

StageRecord eval_project(const PipelineConfig& cfg) {
  StageTimer timer("eval-project");
  EmbeddingTable table = io::load_embeddings(cfg.out_dir / artifact::kEmbeddings);
  io::LabelFile labels = io::load_labels(cfg.labels_file);
  if (labels.nodes.empty()) throw std::runtime_error("label file is empty");

  std::vector<double> features;
  features.reserve(labels.nodes.size() * table.vectors.dim);
  for (const std::string& node : labels.nodes) {
    auto row = table.vectors.row(table.require(node));
    features.insert(features.end(), row.begin(), row.end());
  }
  Pca2d pca = pca_project_2d(features, labels.nodes.size(), table.vectors.dim);

  std::ofstream out(cfg.out_dir / "pca.tsv");
  if (!out) throw std::runtime_error("cannot write pca.tsv");
  out << "node\tx\ty\tclass\n";
  char buf[64];
  for (std::size_t i = 0; i < labels.nodes.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f\t%.6f", pca.coords[i * 2], pca.coords[i * 2 + 1]);
    out << labels.nodes[i] << '\t' << buf << '\t' << labels.class_names[labels.labels[i]] << '\n';
  }
  return timer.finish({"pca.tsv"});
}

}  // namespace

StageRecord cmd_eval(const PipelineConfig& cfg, const std::string& subtask) {
  if (subtask == "classify") return eval_classify(cfg);
  if (subtask == "linkpred") return eval_linkpred(cfg);
  if (subtask == "rank") return eval_rank(cfg);
  if (subtask == "similar") return eval_similar(cfg);
  if (subtask == "project") return eval_project(cfg);
  throw std::invalid_argument("unknown eval subtask '" + subtask + "'");
}

void RunManifest::write(const PipelineConfig& cfg) const {
  json doc;
  doc["version"] = kVersion;
  json config;
  config["input"] = cfg.input.string();
  config["format"] = cfg.format;
  config["undirected"] = cfg.undirected;
  config["p"] = cfg.walk.p;
  config["q"] = cfg.walk.q;
  config["walk_length"] = cfg.walk.walk_length;
  config["walks_per_node"] = cfg.walk.walks_per_node;
  config["em_iterations"] = cfg.em.iterations;
  config["sample_ratio"] = cfg.em.sample_ratio;
  config["dim"] = cfg.train.dim;
  config["window"] = cfg.train.window;
  config["negatives"] = cfg.train.negatives;
  config["epochs"] = cfg.train.epochs;
  config["lr_initial"] = cfg.train.lr_initial;
  config["lr_final"] = cfg.train.lr_final;
  config["mode"] = cfg.train.mode == TrainMode::kDeterministic ? "deterministic" : "parallel";
  config["uniform_matrix"] = cfg.uniform_matrix;
  config["seed"] = cfg.seed;
  config["threads"] = cfg.resolved_threads();
  config["out_dir"] = cfg.out_dir.string();
  doc["config"] = std::move(config);

  json stage_list = json::array();
  for (const StageRecord& s : stages) {
    json stage;
    stage["name"] = s.name;
    stage["seconds"] = s.seconds;
    json artifacts = json::array();
    for (const std::string& a : s.artifacts) {
      char sum[32];
      std::snprintf(sum, sizeof(sum), "%016llx",
                    static_cast<unsigned long long>(io::file_checksum(cfg.out_dir / a)));
      artifacts.push_back({{"path", a}, {"checksum", sum}});
    }
    stage["artifacts"] = std::move(artifacts);
    stage_list.push_back(std::move(stage));
  }
  doc["stages"] = std::move(stage_list);

  std::ofstream out(cfg.out_dir / artifact::kManifest);
  if (!out) throw std::runtime_error("cannot write manifest");
  out << doc.dump(2) << '\n';
}

RunManifest cmd_run(const PipelineConfig& cfg) {
  RunManifest manifest;
  auto run_stage = [&](const char* name, auto&& fn) {
    try {
      manifest.stages.push_back(fn());
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("stage ") + name + " failed: " + e.what());
    }
  };
  run_stage("ingest", [&] { return cmd_ingest(cfg); });
  if (!cfg.uniform_matrix) {
    run_stage("matrix", [&] { return cmd_matrix(cfg); });
  }
  run_stage("walks", [&] { return cmd_walks(cfg); });
  run_stage("embed", [&] { return cmd_embed(cfg); });
  if (!cfg.labels_file.empty()) {
    run_stage("eval-classify", [&] { return cmd_eval(cfg, "classify"); });
  }
  if (!cfg.positives_file.empty() && !cfg.negatives_file.empty()) {
    run_stage("eval-linkpred", [&] { return cmd_eval(cfg, "linkpred"); });
  }
  if (!cfg.queries_file.empty()) {
    run_stage("eval-rank", [&] { return cmd_eval(cfg, "rank"); });
  }
  manifest.write(cfg);
  return manifest;
}

}  // namespace edge2vec
