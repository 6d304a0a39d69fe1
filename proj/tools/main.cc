// Copyright 2026 The evofg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// evofg: synthetic data, feature export, training, zero-shot scoring and
// evaluation for the mixture-of-experts graph anomaly detector.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "evofg/checkpoint.h"
#include "evofg/config.h"
#include "evofg/error.h"
#include "evofg/graph_io.h"
#include "evofg/io.h"
#include "evofg/numeric.h"
#include "evofg/pipeline.h"
#include "evofg/struct_features.h"
#include "evofg/synthetic.h"

namespace fs = std::filesystem;
using namespace evofg;

namespace {

// Flags shared by the training subcommands.
struct CommonFlags {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string llm_fixtures;
  bool no_select = false;
  bool random_backend = false;
  bool no_memory = false;
  bool reset_final = false;
  double lambda = -1.0;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON configuration file")->check(CLI::ExistingFile);
  app->add_option_function<std::uint64_t>(
      "--seed", [&f](std::uint64_t s) { f.seed = s; f.seed_set = true; }, "Base random seed");
  app->add_option("--llm-fixtures", f.llm_fixtures,
                  "Replay recorded chat-completion responses from this directory")
      ->check(CLI::ExistingDirectory);
  app->add_flag("--no-select", f.no_select, "Keep every generated feature");
  app->add_flag("--random-backend", f.random_backend, "Use the deterministic feature generator");
  app->add_flag("--no-memory", f.no_memory, "Projection-only router");
  app->add_flag("--reset-final", f.reset_final, "Fresh router for the final retrain");
  app->add_option("--lambda", f.lambda, "Variance weight of the invariant loss");
}

PipelineConfig resolve_config(const CommonFlags& f) {
  PipelineConfig c = f.config.empty() ? PipelineConfig{} : PipelineConfig::load(f.config);
  if (f.seed_set) c.seed = f.seed;
  if (!f.llm_fixtures.empty()) {
    c.llm.fixtures_dir = f.llm_fixtures;
    c.llm.enabled = true;
  }
  if (f.no_select) c.ablation.select = false;
  if (f.random_backend) c.ablation.random_backend = true;
  if (f.no_memory) c.ablation.memory = false;
  if (f.reset_final) c.ablation.reset_final = true;
  if (f.lambda >= 0.0) c.lambda = f.lambda;
  c.validate();
  return c;
}

std::vector<Graph> load_training(const std::vector<std::string>& dirs) {
  std::vector<Graph> out;
  for (const auto& d : dirs) out.push_back(load_graph_dir(d, true));
  return out;
}

// Label-free view of a graph directory; labels stay on disk.
std::vector<Graph> load_targets(const std::vector<std::string>& dirs) {
  std::vector<Graph> out;
  for (const auto& d : dirs) out.push_back(load_graph_dir(d, false));
  return out;
}

std::unique_ptr<ChatClient> maybe_client(const PipelineConfig& c) {
  if (!c.llm.enabled || c.ablation.random_backend) return nullptr;
  return make_chat_client(c.llm);
}

void write_scores(const fs::path& path, const ScoreResult& s) {
  auto out = io::open_output(path);
  out << "node\tscore\n";
  for (std::size_t i = 0; i < s.scores.size(); ++i) {
    const int node = s.queries.empty() ? static_cast<int>(i) : s.queries[i];
    out << node << '\t' << fmt::format("{:.17g}", s.scores[i]) << '\n';
  }
}

ScoreResult read_scores(const fs::path& path) {
  auto in = io::open_input(path);
  ScoreResult s;
  s.graph = path.parent_path().filename().string();
  if (s.graph.empty()) s.graph = path.stem().string();
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  bool all_nodes = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int node = 0;
    double score = 0.0;
    if (!(ls >> node >> score)) throw ParseError("bad score line in " + path.string(), line_no);
    if (node != static_cast<int>(s.scores.size())) all_nodes = false;
    s.queries.push_back(node);
    s.scores.push_back(score);
  }
  if (all_nodes) s.queries.clear();
  return s;
}

RowVector read_routing_frequency(const fs::path& path) {
  auto in = io::open_input(path);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  std::istringstream ls(line);
  std::vector<double> values;
  for (double v; ls >> v;) values.push_back(v);
  if (values.size() != kAllArchs.size()) throw ParseError("bad routing frequency row in " + path.string(), 2);
  return Eigen::Map<const RowVector>(values.data(), static_cast<Index>(values.size()));
}

TrainedPipeline train(const PipelineConfig& cfg, const std::vector<Graph>& graphs,
                      const std::string& experts_dir) {
  auto client = maybe_client(cfg);
  std::unique_ptr<LlmFeatureGenerator> llm;
  if (client) llm = std::make_unique<LlmFeatureGenerator>(*client);
  TrainOptions opt;
  opt.backend = llm.get();
  std::vector<ExpertModel> experts;
  if (!experts_dir.empty()) {
    for (Arch a : kAllArchs) {
      experts.push_back(load_expert(fs::path(experts_dir) / (std::string(to_string(a)) + ".ckpt")));
    }
    opt.experts = &experts;
  }
  return train_pipeline(cfg, graphs, opt);
}

void print_rounds(const TrainedPipeline& p) {
  for (const auto& r : p.rounds) {
    fmt::print("round {}: {} candidates, {} kept, {} dropped{}\n", r.round, r.candidates.size(),
               r.kept.size(), r.dropped.size(), r.fell_back ? " (generator fell back)" : "");
  }
  fmt::print("final router features: {}\n", p.router.feature_names.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot graph anomaly detection with evolving router features"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic graph with planted anomalies");
  int gen_nodes = 400, gen_dims = 32, gen_communities = 4;
  double gen_rate = 0.05, gen_share = 0.5;
  std::uint64_t gen_seed = 0;
  std::string gen_kind = "mixed", gen_out, gen_name;
  gen->add_option("--nodes", gen_nodes, "Node count")->check(CLI::PositiveNumber);
  gen->add_option("--features", gen_dims, "Attribute dimension")->check(CLI::PositiveNumber);
  gen->add_option("--rate", gen_rate, "Anomaly rate in (0, 0.5)");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--kind", gen_kind, "structural | attribute | mixed");
  gen->add_option("--communities", gen_communities, "Block count")->check(CLI::PositiveNumber);
  gen->add_option("--structural-share", gen_share, "Structural share of mixed anomalies");
  gen->add_option("--name", gen_name, "Graph name (default: output directory name)");
  gen->add_option("--out", gen_out, "Output directory")->required();

  // features
  auto* feat = app.add_subcommand("features", "Export the primitive router-feature table");
  std::string feat_graph, feat_out;
  int feat_d = 32;
  feat->add_option("--graph", feat_graph, "Graph directory")->required()->check(CLI::ExistingDirectory);
  feat->add_option("--d", feat_d, "Aligned feature dimension")->check(CLI::PositiveNumber);
  feat->add_option("--out", feat_out, "Output table")->required();

  // pretrain / warmup / evolve share the training flags.
  CommonFlags pre_flags, warm_flags, evo_flags, rep_flags;
  std::vector<std::string> pre_train, warm_train, evo_train, rep_train, rep_test;
  std::string pre_out, warm_out, evo_out, rep_out, warm_experts, evo_experts;

  auto* pre = app.add_subcommand("pretrain", "Pretrain the four experts");
  add_common(pre, pre_flags);
  pre->add_option("--train", pre_train, "Training graph directories")->required();
  pre->add_option("--out", pre_out, "Output directory")->required();

  auto* warm = app.add_subcommand("warmup", "Pretrain and warm up the router (no evolution)");
  add_common(warm, warm_flags);
  warm->add_option("--train", warm_train, "Training graph directories")->required();
  warm->add_option("--experts", warm_experts, "Reuse experts from a pretrain output");
  warm->add_option("--out", warm_out, "Model directory")->required();

  auto* evo = app.add_subcommand("evolve", "Full training with feature evolution");
  add_common(evo, evo_flags);
  evo->add_option("--train", evo_train, "Training graph directories")->required();
  evo->add_option("--experts", evo_experts, "Reuse experts from a pretrain output");
  evo->add_option("--out", evo_out, "Model directory")->required();

  // score
  auto* score = app.add_subcommand("score", "Score unseen graphs (labels are never read)");
  std::string score_model, score_out;
  std::vector<std::string> score_graphs;
  score->add_option("--model", score_model, "Model directory")->required()->check(CLI::ExistingDirectory);
  score->add_option("--graph", score_graphs, "Graph directories")->required();
  score->add_option("--out", score_out, "Output directory")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "AUROC / AUPRC of score files against label files");
  std::vector<std::string> ev_scores, ev_labels;
  std::string ev_out;
  ev->add_option("--scores", ev_scores, "Score files from `score`")->required();
  ev->add_option("--labels", ev_labels, "Label files, same order")->required();
  ev->add_option("--out", ev_out, "Write the JSON report here");

  // report
  auto* rep = app.add_subcommand("report", "Train, score and evaluate over several seeds");
  add_common(rep, rep_flags);
  int rep_runs = 3;
  rep->add_option("--train", rep_train, "Training graph directories")->required();
  rep->add_option("--test", rep_test, "Test graph directories")->required();
  rep->add_option("--runs", rep_runs, "Number of seeds")->check(CLI::PositiveNumber);
  rep->add_option("--out", rep_out, "Report directory")->required();

  // save / load
  auto* save = app.add_subcommand("save", "Re-serialize a model directory");
  std::string save_model, save_out;
  save->add_option("--model", save_model, "Model directory")->required()->check(CLI::ExistingDirectory);
  save->add_option("--out", save_out, "Destination directory")->required();
  auto* load = app.add_subcommand("load", "Validate a model directory and print a summary");
  std::string load_model;
  load->add_option("--model", load_model, "Model directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (gen->parsed()) {
      SyntheticOptions opt;
      opt.communities = gen_communities;
      opt.structural_share = gen_share;
      opt.name = gen_name.empty() ? fs::path(gen_out).filename().string() : gen_name;
      const Graph g = gen_synthetic(gen_nodes, gen_dims, gen_rate, gen_seed,
                                    parse_planted_kind(gen_kind), opt);
      save_graph(g, gen_out);
      fmt::print("{}: {} nodes, {} edges, {} anomalies\n", g.name(), g.num_nodes(), g.num_edges(),
                 g.num_anomalies());
    } else if (feat->parsed()) {
      const auto ctx = GraphContext::build(load_graph_dir(feat_graph, false), feat_d);
      const RouterFeatureTable t = compute_primitives(ctx->graph, ctx->features);
      t.write_text(feat_out);
      fmt::print("wrote {} columns for {} nodes\n", t.num_columns(), t.num_nodes());
    } else if (pre->parsed()) {
      const PipelineConfig cfg = resolve_config(pre_flags);
      const auto experts = pretrain_experts(cfg, load_training(pre_train));
      fs::create_directories(pre_out);
      for (const auto& m : experts) {
        save_expert(m, fs::path(pre_out) / (std::string(to_string(m.arch)) + ".ckpt"));
      }
      io::open_output(fs::path(pre_out) / "config.json") << cfg.to_json() << "\n";
    } else if (warm->parsed()) {
      PipelineConfig cfg = resolve_config(warm_flags);
      cfg.R = 0;
      const TrainedPipeline p = train(cfg, load_training(warm_train), warm_experts);
      save_pipeline(p, warm_out);
      fmt::print("warm-up KL {:.6f}\n", p.warmup_trace.empty() ? 0.0 : p.warmup_trace.back());
    } else if (evo->parsed()) {
      const PipelineConfig cfg = resolve_config(evo_flags);
      const TrainedPipeline p = train(cfg, load_training(evo_train), evo_experts);
      save_pipeline(p, evo_out);
      print_rounds(p);
    } else if (score->parsed()) {
      const TrainedPipeline p = load_pipeline(score_model);
      for (const Graph& g : load_targets(score_graphs)) {
        const ScoreResult s = score_graph(p, g);
        const fs::path dir = fs::path(score_out) / g.name();
        write_scores(dir / "scores.tsv", s);
        const RowVector f = routing_frequency(s.routing.weights);
        auto out = io::open_output(dir / "routing_frequency.tsv");
        for (Arch a : kAllArchs) out << to_string(a) << (a == Arch::kGpr ? "\n" : "\t");
        for (Index e = 0; e < f.size(); ++e) out << fmt::format("{:.10g}", f[e]) << (e + 1 < f.size() ? "\t" : "\n");
        fmt::print("{}: scored {} nodes\n", g.name(), s.scores.size());
      }
    } else if (ev->parsed()) {
      if (ev_scores.size() != ev_labels.size()) throw ParameterError("--scores and --labels differ in count");
      MetricsReport report;
      report.seeds.push_back(0);
      report.runs.emplace_back();
      for (std::size_t i = 0; i < ev_scores.size(); ++i) {
        ScoreResult s = read_scores(ev_scores[i]);
        const int n = s.queries.empty() ? static_cast<int>(s.scores.size())
                                        : s.queries.back() + 1;
        const std::vector<int> labels = load_labels(ev_labels[i], n);
        s.routing.weights = Matrix(0, 0);
        GraphMetrics m = evaluate(s, labels);
        const fs::path freq = fs::path(ev_scores[i]).parent_path() / "routing_frequency.tsv";
        if (fs::exists(freq)) m.routing_frequency = read_routing_frequency(freq);
        report.runs.back().push_back(std::move(m));
      }
      std::cout << report.to_text();
      if (!ev_out.empty()) io::open_output(ev_out) << report.to_json();
    } else if (rep->parsed()) {
      const PipelineConfig cfg = resolve_config(rep_flags);
      const auto train_graphs = load_training(rep_train);
      const auto targets = load_targets(rep_test);
      MetricsReport report;
      for (int run = 0; run < rep_runs; ++run) {
        PipelineConfig c = cfg;
        c.seed = cfg.seed + static_cast<std::uint64_t>(run);
        const TrainedPipeline p = train(c, train_graphs, "");
        const fs::path run_dir = fs::path(rep_out) / ("run_" + std::to_string(c.seed));
        save_pipeline(p, run_dir / "model");
        std::vector<GraphMetrics> metrics;
        for (std::size_t t = 0; t < targets.size(); ++t) {
          const ScoreResult s = score_graph(p, targets[t]);
          write_scores(run_dir / "scores" / targets[t].name() / "scores.tsv", s);
          // Labels are read only here, after scoring.
          const auto labels = load_labels(GraphPaths::in_dir(rep_test[t]).labels,
                                          targets[t].num_nodes());
          metrics.push_back(evaluate(s, labels));
        }
        report.seeds.push_back(c.seed);
        report.runs.push_back(std::move(metrics));
      }
      io::open_output(fs::path(rep_out) / "metrics.json") << report.to_json();
      io::open_output(fs::path(rep_out) / "metrics.txt") << report.to_text();
      std::cout << report.to_text();
    } else if (save->parsed()) {
      save_pipeline(load_pipeline(save_model), save_out);
    } else if (load->parsed()) {
      const TrainedPipeline p = load_pipeline(load_model);
      fmt::print("experts: {}\nrouter: d_r={} d_m={} M={} memory={}\ngenerated features: {}\n",
                 p.experts.size(), p.router.dims.features, p.router.dims.memory,
                 p.router.dims.slots, p.router.use_memory ? "on" : "off", p.generated.size());
      for (const auto& name : p.router.feature_names) fmt::print("  {}\n", name);
    }
  } catch (const ParseError& e) {
    spdlog::error("{}{}", e.what(), e.line() ? fmt::format(" (line {})", e.line()) : "");
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
