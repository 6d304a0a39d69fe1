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

#ifndef EVOFG_PIPELINE_H_
#define EVOFG_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evofg/config.h"
#include "evofg/experts.h"
#include "evofg/feature_generation.h"
#include "evofg/feature_table.h"
#include "evofg/graph.h"
#include "evofg/graph_context.h"
#include "evofg/llm_client.h"
#include "evofg/router.h"
#include "evofg/shapley.h"

namespace evofg {

struct RoundReport {
  int round = 0;
  std::vector<std::string> candidates;
  std::vector<std::string> evaluated;  // columns the Shapley pass ran over
  ShapleyStats stats;                  // empty when selection is off
  Selection selection;
  std::vector<std::string> kept;
  std::vector<std::string> dropped;
  bool fell_back = false;
  std::vector<std::string> generation_log;
  std::vector<double> warmup_trace;
  std::vector<double> router_trace;
};

struct TrainedPipeline {
  PipelineConfig config;
  std::vector<ExpertModel> experts;   // kAllArchs order
  RouterModel router;                 // router.feature_names is the final set
  std::vector<FeatureExpr> generated;  // every generated column, creation order
  std::vector<Matrix> key_bank;       // per expert, cached training key embeddings
  std::vector<RoundReport> rounds;
  std::vector<double> warmup_trace;
  std::vector<double> final_trace;
};

// Primitive columns plus every generated expression, with the active mask
// set to `active` (all columns when empty).
RouterFeatureTable build_feature_table(const GraphContext& ctx,
                                       std::span<const FeatureExpr> generated,
                                       const std::vector<std::string>& active);

struct TrainOptions {
  // Replaces the deterministic generator (which stays as the fallback).
  FeatureGenerator* backend = nullptr;
  // Reused instead of pretraining when non-null (kAllArchs order).
  const std::vector<ExpertModel>* experts = nullptr;
};

// One expert per architecture, trained on all graphs.
std::vector<ExpertModel> pretrain_experts(const PipelineConfig& cfg,
                                          std::span<const Graph> train_graphs);

// Pretrain experts, warm up the router, run R generate/select/retrain
// rounds and a final retrain. Throws Error prefixed with the failing stage.
TrainedPipeline train_pipeline(const PipelineConfig& cfg, std::span<const Graph> train_graphs,
                               const TrainOptions& options = {});

struct ScoreResult {
  std::string graph;
  std::vector<double> scores;  // one per query node
  NodeSet queries;             // empty means all nodes, in order
  Matrix expert_scores;        // per-expert scores, rows follow scores
  RoutingOutput routing;       // over all nodes
};

// Zero-shot scoring; never reads g's labels. Keys are the cached training
// bank, or a random 10% of g's nodes when config.target_keys is set.
ScoreResult score_graph(const TrainedPipeline& p, const Graph& g);
// Keys are the given rows of g itself and queries their complement.
ScoreResult score_graph_with_keys(const TrainedPipeline& p, const Graph& g, const NodeSet& keys);

struct GraphMetrics {
  std::string graph;
  std::optional<double> auroc;  // nullopt when the labels are single-class
  std::optional<double> auprc;
  std::vector<std::optional<double>> expert_auroc;
  RowVector routing_frequency;
};

GraphMetrics evaluate(const ScoreResult& s, std::span<const int> labels);

struct MetricsReport {
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<GraphMetrics>> runs;  // [run][graph]

  std::string to_json() const;
  std::string to_text() const;
};

// Builds the chat-completion backend described by `llm`: fixture replay
// when fixtures_dir is set, HTTP otherwise (key from EVOFG_LLM_API_KEY).
std::unique_ptr<ChatClient> make_chat_client(const LlmConfig& llm);

// Trains and scores once per seed in {cfg.seed, cfg.seed + 1, ...}. Test
// graphs are scored label-free; their in-memory labels are used only for
// the metrics. `make_backend` supplies a fresh generator per run (the
// deterministic one when empty or when it returns null).
MetricsReport run_experiment(
    const PipelineConfig& cfg, std::span<const Graph> train_graphs,
    std::span<const Graph> test_graphs, int runs,
    const std::function<std::unique_ptr<FeatureGenerator>(std::uint64_t seed)>& make_backend = {});

// Directory layout: config.json, experts/<ARCH>.ckpt, router.ckpt,
// key_bank.ckpt, features.json, rounds/round_<r>.tsv.
void save_pipeline(const TrainedPipeline& p, const std::filesystem::path& dir);
TrainedPipeline load_pipeline(const std::filesystem::path& dir);

}  // namespace evofg

#endif  // EVOFG_PIPELINE_H_
