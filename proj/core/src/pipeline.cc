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

#include "evofg/pipeline.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "evofg/checkpoint.h"
#include "evofg/error.h"
#include "evofg/feature_dsl.h"
#include "evofg/io.h"
#include "evofg/numeric.h"
#include "evofg/struct_features.h"

namespace evofg {

using nlohmann::json;

namespace {

std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag) {
  Rng rng = make_rng(seed, tag);
  return rng();
}

template <typename Fn>
auto stage(const std::string& name, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error("stage '" + name + "' failed: " + e.what());
  }
}

ExpertDims expert_dims(const PipelineConfig& c) { return {c.d, c.d_e, c.d_prime}; }

// A training graph with its frozen expert outputs.
struct TrainGraph {
  std::unique_ptr<GraphContext> ctx;
  RouterFeatureTable table;
  NodeSet keys;
  RouterSample sample;
  std::vector<Matrix> hk;  // per expert
};

void refresh_features(std::vector<TrainGraph>& graphs) {
  for (auto& tg : graphs) tg.sample.features = tg.table.standardized_active();
}

std::vector<RouterSample> samples_of(const std::vector<TrainGraph>& graphs) {
  std::vector<RouterSample> out;
  for (const auto& tg : graphs) out.push_back(tg.sample);
  return out;
}

RouterTrainConfig router_config(const PipelineConfig& c, int epochs) {
  RouterTrainConfig rc;
  rc.epochs = epochs;
  rc.lr = c.router_lr > 0 ? c.router_lr : c.lr;
  rc.weight_decay = c.wd;
  rc.environments = c.K;
  rc.lambda = c.lambda;
  rc.mask_rate = c.mask_rate;
  return rc;
}

void set_router_features(RouterModel& r, const std::vector<std::string>& names,
                         std::uint64_t seed) {
  if (static_cast<int>(names.size()) != r.dims.features) {
    reinit_projection(r, static_cast<int>(names.size()), seed);
  }
  r.feature_names = names;
}

json expr_to_json(const FeatureExpr& e) {
  return {{"op", std::string(to_string(e.op))},
          {"args", e.args},
          {"category", std::string(to_string(e.category))}};
}

FeatureExpr expr_from_json(const json& j) {
  FeatureExpr e;
  const auto op = parse_op(j.at("op").get<std::string>());
  const auto cat = parse_category(j.at("category").get<std::string>());
  if (!op || !cat) throw ParseError("bad generated-feature entry " + j.dump(), 0);
  e.op = *op;
  e.category = *cat;
  e.args = j.at("args").get<std::vector<std::string>>();
  return e;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Population standard deviation.
double std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

RouterFeatureTable build_feature_table(const GraphContext& ctx,
                                       std::span<const FeatureExpr> generated,
                                       const std::vector<std::string>& active) {
  RouterFeatureTable table = compute_primitives(ctx.graph, ctx.features);
  for (const FeatureExpr& e : generated) append_expr(e, table);
  if (!active.empty()) {
    std::vector<bool> mask(static_cast<std::size_t>(table.num_columns()), false);
    for (const auto& name : active) mask[static_cast<std::size_t>(table.index_of(name))] = true;
    table.set_active(mask);
    if (table.active_names() != active) {
      throw ContractError("active feature order does not match the table's column order");
    }
  }
  return table;
}

std::vector<ExpertModel> pretrain_experts(const PipelineConfig& cfg,
                                          std::span<const Graph> train_graphs) {
  cfg.validate();
  std::vector<std::unique_ptr<GraphContext>> owned;
  std::vector<const GraphContext*> ctxs;
  for (const Graph& g : train_graphs) {
    g.require_trainable();
    owned.push_back(GraphContext::build(g, cfg.d));
    ctxs.push_back(owned.back().get());
  }
  std::vector<ExpertModel> experts;
  for (std::size_t a = 0; a < kAllArchs.size(); ++a) {
    ExpertTrainConfig ec;
    ec.epochs = cfg.expert_epochs[a];
    ec.lr = cfg.lr;
    ec.weight_decay = cfg.wd;
    ec.key_fraction = cfg.key_fraction;
    experts.push_back(pretrain_expert(kAllArchs[a], ctxs, expert_dims(cfg), ec, cfg.seed));
    spdlog::info("pretrained {} expert, final loss {:.4f}", to_string(kAllArchs[a]),
                 experts.back().loss_trace.empty() ? NAN : experts.back().loss_trace.back());
  }
  return experts;
}

TrainedPipeline train_pipeline(const PipelineConfig& cfg, std::span<const Graph> train_graphs,
                               const TrainOptions& options) {
  FeatureGenerator* backend = options.backend;
  cfg.validate();
  if (train_graphs.empty()) throw ParameterError("need at least one training graph");
  TrainedPipeline p;
  p.config = cfg;
  const std::uint64_t seed = cfg.seed;

  std::vector<TrainGraph> graphs(train_graphs.size());
  stage("align", [&] {
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      train_graphs[i].require_trainable();
      graphs[i].ctx = GraphContext::build(train_graphs[i], cfg.d);
    }
    return 0;
  });
  stage("pretrain", [&] {
    if (options.experts) {
      if (options.experts->size() != kAllArchs.size()) {
        throw ParameterError("expected one pretrained expert per architecture");
      }
      for (std::size_t a = 0; a < kAllArchs.size(); ++a) {
        const ExpertModel& m = (*options.experts)[a];
        if (m.arch != kAllArchs[a] || !(m.dims == expert_dims(cfg))) {
          throw ParameterError("pretrained expert " + std::to_string(a) +
                               " does not match the configuration");
        }
      }
      p.experts = *options.experts;
    } else {
      p.experts = pretrain_experts(cfg, train_graphs);
    }
    return 0;
  });

  stage("expert-outputs", [&] {
    Rng rng = make_rng(seed, "router-keys");
    p.key_bank.assign(p.experts.size(), Matrix(0, cfg.d_e));
    for (auto& tg : graphs) {
      const Graph& g = tg.ctx->graph;
      tg.keys = sample_keys(g, cfg.key_fraction, rng);
      RouterSample& s = tg.sample;
      s.ctx = tg.ctx.get();
      s.queries = complement(g.num_nodes(), tg.keys);
      s.y = gather(g.labels(), s.queries);
      Matrix scores(static_cast<Index>(s.queries.size()), static_cast<Index>(p.experts.size()));
      for (std::size_t e = 0; e < p.experts.size(); ++e) {
        const Matrix h = encode(p.experts[e], *tg.ctx);
        s.hq.push_back(h(s.queries, Eigen::all));
        tg.hk.push_back(h(tg.keys, Eigen::all));
        s.hrec.push_back(reconstruct(p.experts[e], s.hq.back(), tg.hk.back()));
        const auto sc = anomaly_scores(s.hq.back(), s.hrec.back());
        for (std::size_t i = 0; i < sc.size(); ++i) scores(static_cast<Index>(i), static_cast<Index>(e)) = sc[i];
        Matrix& bank = p.key_bank[e];
        const Index old = bank.rows();
        bank.conservativeResize(old + tg.hk.back().rows(), cfg.d_e);
        bank.bottomRows(tg.hk.back().rows()) = tg.hk.back();
      }
      s.targets = expert_correctness(scores, s.y);
    }
    return 0;
  });

  stage("primitives", [&] {
    for (auto& tg : graphs) tg.table = compute_primitives(tg.ctx->graph, tg.ctx->features);
    refresh_features(graphs);
    return 0;
  });

  RouterDims rd{cfg.d, graphs[0].table.num_active(), cfg.d_m, cfg.M, cfg.E};
  p.router = init_router(rd, seed, cfg.ablation.memory);
  p.router.feature_names = graphs[0].table.active_names();
  p.warmup_trace = stage("warmup", [&] {
    return warmup_router(p.router, samples_of(graphs), router_config(cfg, cfg.warmup_epochs),
                         derive_seed(seed, "warmup"));
  });

  RandomFeatureGenerator random_backend(derive_seed(seed, "generator"));
  RandomFeatureGenerator fallback(derive_seed(seed, "generator-fallback"));
  FeatureGenerator& primary =
      (backend && !cfg.ablation.random_backend) ? *backend : static_cast<FeatureGenerator&>(random_backend);
  std::vector<std::string> accepted, rejected;

  for (int r = 1; r <= cfg.R; ++r) {
    const std::string tag = "round-" + std::to_string(r);
    const std::uint64_t round_seed = derive_seed(seed, tag);
    RoundReport rep;
    rep.round = r;

    stage(tag + "/generate", [&] {
      GenerationContext gctx{&graphs[0].table, accepted, rejected, r};
      GenerationReport gen = generate_candidates(primary, fallback, gctx, cfg.m);
      rep.fell_back = gen.fell_back;
      rep.generation_log = gen.log;
      for (const FeatureExpr& e : gen.candidates) {
        for (auto& tg : graphs) append_expr(e, tg.table);
        p.generated.push_back(e);
        rep.candidates.push_back(e.to_string());
      }
      return 0;
    });
    refresh_features(graphs);
    rep.evaluated = graphs[0].table.active_names();
    set_router_features(p.router, rep.evaluated, round_seed);

    // The utility needs a router aligned on the expanded set.
    rep.warmup_trace = stage(tag + "/warmup", [&] {
      return warmup_router(p.router, samples_of(graphs), router_config(cfg, cfg.warmup_epochs),
                           derive_seed(round_seed, "warmup"));
    });

    stage(tag + "/select", [&] {
      const int n = static_cast<int>(rep.evaluated.size());
      if (cfg.ablation.select && n >= 2) {
        const auto samples = samples_of(graphs);
        const RouterModel frozen = p.router;
        rep.stats = estimate_contributions(
            n, [&](const std::vector<bool>& s) { return routing_utility(frozen, samples, s); },
            cfg.T, derive_seed(round_seed, "shapley"));
        rep.selection = select_features(rep.stats, cfg.z_crit);
      } else {
        rep.selection.keep.assign(static_cast<std::size_t>(n), true);
      }
      for (int i = 0; i < n; ++i) {
        const auto& name = rep.evaluated[static_cast<std::size_t>(i)];
        const bool keep = rep.selection.keep[static_cast<std::size_t>(i)];
        (keep ? rep.kept : rep.dropped).push_back(name);
        for (auto& tg : graphs) tg.table.set_active(name, keep);
      }
      accepted.clear();
      rejected.clear();
      for (const auto& c : rep.candidates) {
        const bool kept = std::find(rep.kept.begin(), rep.kept.end(), c) != rep.kept.end();
        (kept ? accepted : rejected).push_back(c);
      }
      spdlog::info("round {}: {} candidates, kept {} of {} features", r, rep.candidates.size(),
                   rep.kept.size(), n);
      return 0;
    });
    refresh_features(graphs);
    set_router_features(p.router, graphs[0].table.active_names(), derive_seed(round_seed, "reinit"));

    rep.router_trace = stage(tag + "/train", [&] {
      return train_router(p.router, samples_of(graphs), router_config(cfg, cfg.router_epochs),
                          derive_seed(round_seed, "train"));
    });
    p.rounds.push_back(std::move(rep));
  }

  if (cfg.R > 0) {
    p.final_trace = stage("final", [&] {
      const auto samples = samples_of(graphs);
      if (cfg.ablation.reset_final) {
        RouterDims dims = p.router.dims;
        const auto names = p.router.feature_names;
        p.router = init_router(dims, derive_seed(seed, "final-router"), cfg.ablation.memory);
        p.router.feature_names = names;
        warmup_router(p.router, samples, router_config(cfg, cfg.warmup_epochs),
                      derive_seed(seed, "final-warmup"));
      }
      return train_router(p.router, samples, router_config(cfg, cfg.router_epochs),
                          derive_seed(seed, "final-train"));
    });
  }
  p.router.train_mode = false;
  return p;
}

namespace {

ScoreResult score_impl(const TrainedPipeline& p, const Graph& g, const NodeSet* keys) {
  const PipelineConfig& cfg = p.config;
  auto ctx = GraphContext::build(g.without_labels(), cfg.d);
  const RouterFeatureTable table = build_feature_table(*ctx, p.generated, p.router.feature_names);
  RouterModel router = p.router;
  router.train_mode = false;

  ScoreResult out;
  out.graph = g.name();
  out.routing = route(router, *ctx, table.standardized_active());
  if (keys) out.queries = complement(g.num_nodes(), *keys);

  std::vector<Matrix> hq, hrec;
  out.expert_scores.resize(keys ? static_cast<Index>(out.queries.size()) : g.num_nodes(),
                           static_cast<Index>(p.experts.size()));
  for (std::size_t e = 0; e < p.experts.size(); ++e) {
    const Matrix h = encode(p.experts[e], *ctx);
    if (keys) {
      hq.push_back(h(out.queries, Eigen::all));
      hrec.push_back(reconstruct(p.experts[e], hq.back(), h(*keys, Eigen::all)));
    } else {
      hq.push_back(h);
      hrec.push_back(reconstruct(p.experts[e], h, p.key_bank[e]));
    }
    const auto sc = anomaly_scores(hq.back(), hrec.back());
    for (std::size_t i = 0; i < sc.size(); ++i) {
      out.expert_scores(static_cast<Index>(i), static_cast<Index>(e)) = sc[i];
    }
  }
  const Matrix weights = keys ? Matrix(out.routing.weights(out.queries, Eigen::all))
                              : out.routing.weights;
  const auto [h_final, hrec_final] = aggregate(weights, hq, hrec);
  out.scores = anomaly_scores(h_final, hrec_final);
  return out;
}

}  // namespace

ScoreResult score_graph(const TrainedPipeline& p, const Graph& g) {
  if (p.config.target_keys) {
    Rng rng = make_rng(p.config.seed, "target-keys:" + g.name());
    const int n = g.num_nodes();
    std::vector<int> nodes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) nodes[static_cast<std::size_t>(i)] = i;
    const auto want = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(p.config.key_fraction * n)));
    for (std::size_t i = 0; i < want; ++i) {
      std::swap(nodes[i], nodes[i + uniform_index(rng, nodes.size() - i)]);
    }
    NodeSet keys(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(want));
    std::sort(keys.begin(), keys.end());
    return score_impl(p, g, &keys);
  }
  return score_impl(p, g, nullptr);
}

ScoreResult score_graph_with_keys(const TrainedPipeline& p, const Graph& g, const NodeSet& keys) {
  if (keys.empty()) throw ContractError("score_graph_with_keys needs at least one key");
  return score_impl(p, g, &keys);
}

GraphMetrics evaluate(const ScoreResult& s, std::span<const int> labels) {
  std::vector<int> y = s.queries.empty() ? std::vector<int>(labels.begin(), labels.end())
                                         : gather(labels, s.queries);
  if (y.size() != s.scores.size()) throw ShapeError("label count does not match scores");
  GraphMetrics m;
  m.graph = s.graph;
  auto metric = [&](auto fn, std::span<const double> sc) -> std::optional<double> {
    try {
      return fn(sc, y);
    } catch (const MetricError&) {
      return std::nullopt;
    }
  };
  m.auroc = metric(auroc, s.scores);
  m.auprc = metric(auprc, s.scores);
  for (Index e = 0; e < s.expert_scores.cols(); ++e) {
    const Vector col = s.expert_scores.col(e);
    m.expert_auroc.push_back(metric(auroc, std::span<const double>(col.data(), col.size())));
  }
  m.routing_frequency = routing_frequency(s.routing.weights);
  return m;
}

std::string MetricsReport::to_json() const {
  json j;
  j["seeds"] = seeds;
  j["runs"] = json::array();
  for (const auto& run : runs) {
    json jr = json::array();
    for (const auto& m : run) {
      json ex = json::array();
      for (const auto& a : m.expert_auroc) ex.push_back(optional_json(a));
      std::vector<double> freq(m.routing_frequency.data(),
                               m.routing_frequency.data() + m.routing_frequency.size());
      jr.push_back({{"graph", m.graph},
                    {"auroc", optional_json(m.auroc)},
                    {"auprc", optional_json(m.auprc)},
                    {"expert_auroc", ex},
                    {"routing_frequency", freq}});
    }
    j["runs"].push_back(jr);
  }
  json summary = json::object();
  if (!runs.empty()) {
    for (std::size_t g = 0; g < runs[0].size(); ++g) {
      std::vector<double> roc, prc;
      for (const auto& run : runs) {
        if (run[g].auroc) roc.push_back(*run[g].auroc);
        if (run[g].auprc) prc.push_back(*run[g].auprc);
      }
      summary[runs[0][g].graph] = {{"auroc_mean", mean_of(roc)},
                                   {"auroc_std", std_of(roc)},
                                   {"auprc_mean", mean_of(prc)},
                                   {"auprc_std", std_of(prc)},
                                   {"defined_runs", roc.size()}};
    }
  }
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

std::string MetricsReport::to_text() const {
  std::ostringstream out;
  if (runs.empty()) return "no runs\n";
  out << fmt::format("{:<24} {:>17} {:>17}", "graph", "AUROC", "AUPRC");
  const std::size_t experts = runs[0].empty() ? 0 : runs[0][0].expert_auroc.size();
  for (std::size_t e = 0; e < experts; ++e) {
    out << fmt::format(" {:>10}", std::string(to_string(kAllArchs[e % kAllArchs.size()])));
  }
  out << "\n";
  for (std::size_t g = 0; g < runs[0].size(); ++g) {
    std::vector<double> roc, prc;
    std::vector<std::vector<double>> ex(experts);
    for (const auto& run : runs) {
      if (run[g].auroc) roc.push_back(*run[g].auroc);
      if (run[g].auprc) prc.push_back(*run[g].auprc);
      for (std::size_t e = 0; e < experts; ++e) {
        if (run[g].expert_auroc[e]) ex[e].push_back(*run[g].expert_auroc[e]);
      }
    }
    out << fmt::format("{:<24} {:>8.4f}±{:<8.4f} {:>8.4f}±{:<8.4f}", runs[0][g].graph,
                       mean_of(roc), std_of(roc), mean_of(prc), std_of(prc));
    for (const auto& e : ex) out << fmt::format(" {:>10.4f}", mean_of(e));
    out << "\n";
  }
  const bool any_routing = std::any_of(runs[0].begin(), runs[0].end(), [](const GraphMetrics& m) {
    return m.routing_frequency.size() > 0;
  });
  if (!any_routing) return out.str();
  out << "\nrouting frequency (mean over runs)\n";
  for (std::size_t g = 0; g < runs[0].size(); ++g) {
    RowVector f = RowVector::Zero(runs[0][g].routing_frequency.size());
    for (const auto& run : runs) f += run[g].routing_frequency;
    f /= static_cast<double>(runs.size());
    out << fmt::format("{:<24}", runs[0][g].graph);
    for (Index e = 0; e < f.size(); ++e) out << fmt::format(" {:>10.4f}", f[e]);
    out << "\n";
  }
  return out.str();
}

void save_pipeline(const TrainedPipeline& p, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "experts");
  io::open_output(dir / "config.json") << p.config.to_json() << "\n";
  for (const auto& m : p.experts) {
    save_expert(m, dir / "experts" / (std::string(to_string(m.arch)) + ".ckpt"));
  }
  save_router(p.router, dir / "router.ckpt");
  ParameterList bank;
  for (std::size_t e = 0; e < p.key_bank.size(); ++e) {
    bank.add(std::string(to_string(p.experts[e].arch)), p.key_bank[e]);
  }
  save_tensors(bank, dir / "key_bank.ckpt");

  json features = {{"generated", json::array()}, {"final", p.router.feature_names}};
  for (const auto& e : p.generated) features["generated"].push_back(expr_to_json(e));
  json traces = {{"warmup", p.warmup_trace}, {"final", p.final_trace}, {"rounds", json::array()}};
  for (const auto& r : p.rounds) {
    traces["rounds"].push_back({{"round", r.round},
                                {"candidates", r.candidates},
                                {"kept", r.kept},
                                {"dropped", r.dropped},
                                {"fell_back", r.fell_back},
                                {"generation_log", r.generation_log},
                                {"warmup", r.warmup_trace},
                                {"train", r.router_trace}});
    if (r.stats.num_features() > 0) {
      write_stats(dir / "rounds" / ("round_" + std::to_string(r.round) + ".tsv"), r.stats,
                  r.evaluated, r.selection);
    }
  }
  features["history"] = traces;
  io::open_output(dir / "features.json") << features.dump(2) << "\n";
}

TrainedPipeline load_pipeline(const std::filesystem::path& dir) {
  TrainedPipeline p;
  p.config = PipelineConfig::load(dir / "config.json");
  for (Arch a : kAllArchs) {
    p.experts.push_back(load_expert(dir / "experts" / (std::string(to_string(a)) + ".ckpt")));
  }
  p.router = load_router(dir / "router.ckpt");
  const ParameterList bank = load_tensors(dir / "key_bank.ckpt");
  for (Arch a : kAllArchs) p.key_bank.push_back(bank.at(std::string(to_string(a))));

  auto in = io::open_input(dir / "features.json");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    const json j = json::parse(ss.str());
    for (const auto& e : j.at("generated")) p.generated.push_back(expr_from_json(e));
    if (j.at("final").get<std::vector<std::string>>() != p.router.feature_names) {
      throw ParseError("features.json disagrees with the router checkpoint", 0);
    }
    const json& h = j.at("history");
    p.warmup_trace = h.at("warmup").get<std::vector<double>>();
    p.final_trace = h.at("final").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad features.json: ") + e.what(), 0);
  }
  return p;
}

std::unique_ptr<ChatClient> make_chat_client(const LlmConfig& llm) {
  ChatOptions opt;
  opt.model = llm.model;
  if (!llm.fixtures_dir.empty()) {
    return std::make_unique<ChatClient>(std::make_unique<FixtureTransport>(llm.fixtures_dir), opt);
  }
  HttpOptions http;
  http.base_url = llm.base_url;
  http.api_key = api_key_from_env();
  return std::make_unique<ChatClient>(std::make_unique<HttpTransport>(http), opt);
}

MetricsReport run_experiment(
    const PipelineConfig& cfg, std::span<const Graph> train_graphs,
    std::span<const Graph> test_graphs, int runs,
    const std::function<std::unique_ptr<FeatureGenerator>(std::uint64_t seed)>& make_backend) {
  if (runs < 1) throw ParameterError("runs must be positive");
  MetricsReport report;
  for (int run = 0; run < runs; ++run) {
    PipelineConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(run);
    std::unique_ptr<FeatureGenerator> backend;
    if (make_backend) backend = make_backend(c.seed);
    TrainOptions opt;
    opt.backend = backend.get();
    const TrainedPipeline p = train_pipeline(c, train_graphs, opt);
    std::vector<GraphMetrics> metrics;
    for (const Graph& g : test_graphs) {
      const ScoreResult s = score_graph(p, g);
      metrics.push_back(evaluate(s, g.labels()));
    }
    report.seeds.push_back(c.seed);
    report.runs.push_back(std::move(metrics));
  }
  return report;
}

}  // namespace evofg
