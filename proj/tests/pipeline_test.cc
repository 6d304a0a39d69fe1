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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "evofg/error.h"
#include "evofg/graph_io.h"
#include "evofg/io.h"
#include "evofg/pipeline.h"
#include "evofg/synthetic.h"
#include "test_support.h"

namespace evofg {
namespace {

namespace fs = std::filesystem;

PipelineConfig tiny_config() {
  PipelineConfig c;
  c.d = c.d_e = c.d_prime = c.d_m = c.M = 6;
  c.expert_epochs = {2, 2, 2, 2};
  c.warmup_epochs = 3;
  c.router_epochs = 2;
  c.T = 2;
  c.K = 3;
  c.m = 3;
  c.R = 1;
  c.seed = 7;
  return c;
}

Graph synthetic(std::uint64_t seed, int communities = 3) {
  SyntheticOptions o;
  o.communities = communities;
  o.name = "syn" + std::to_string(seed);
  return gen_synthetic(60, 10, 0.1, seed, PlantedKind::kMixed, o);
}

struct Trained {
  std::vector<Graph> train;
  TrainedPipeline p;
};

const Trained& shared_run() {
  static const Trained t = [] {
    Trained out;
    out.train = {synthetic(1), synthetic(2)};
    out.p = train_pipeline(tiny_config(), out.train);
    return out;
  }();
  return t;
}

TEST(Pipeline, RoundsAndTraces) {
  const TrainedPipeline& p = shared_run().p;
  ASSERT_EQ(p.experts.size(), 4u);
  ASSERT_EQ(p.rounds.size(), 1u);
  EXPECT_EQ(p.rounds[0].candidates.size(), 3u);
  EXPECT_EQ(p.rounds[0].evaluated.size(), 26u);
  EXPECT_EQ(p.rounds[0].kept.size() + p.rounds[0].dropped.size(), 26u);
  EXPECT_EQ(p.router.feature_names, p.rounds[0].kept);
  EXPECT_EQ(p.warmup_trace.size(), 3u);
  EXPECT_EQ(p.final_trace.size(), 2u);
  EXPECT_EQ(p.generated.size(), 3u);
  EXPECT_FALSE(p.router.train_mode);
}

TEST(Pipeline, ZeroRoundsUsesPrimitivesOnly) {
  PipelineConfig c = tiny_config();
  c.R = 0;
  const std::vector<Graph> train = {synthetic(1)};
  const TrainedPipeline p = train_pipeline(c, train);
  EXPECT_TRUE(p.rounds.empty());
  EXPECT_TRUE(p.generated.empty());
  EXPECT_EQ(p.router.feature_names.size(), 23u);
  EXPECT_TRUE(p.final_trace.empty());
}

TEST(Pipeline, DeterministicMetrics) {
  PipelineConfig c = tiny_config();
  const std::vector<Graph> train = {synthetic(1)};
  const std::vector<Graph> test = {synthetic(5, 4)};
  const MetricsReport a = run_experiment(c, train, test, 1);
  const MetricsReport b = run_experiment(c, train, test, 1);
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(a.to_text(), b.to_text());
}

TEST(Pipeline, SaveLoadScoreIsBitExact) {
  const auto& run = shared_run();
  const auto dir = testing::temp_dir("pipeline-save");
  save_pipeline(run.p, dir);
  const TrainedPipeline back = load_pipeline(dir);
  const Graph test = synthetic(9, 5);
  const ScoreResult a = score_graph(run.p, test);
  const ScoreResult b = score_graph(back, test);
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_EQ(a.routing.weights, b.routing.weights);
  EXPECT_EQ(back.router.feature_names, run.p.router.feature_names);
}

TEST(Pipeline, ScoringNeverReadsLabels) {
  const auto& run = shared_run();
  const Graph test = synthetic(9, 5);
  const auto dir = testing::temp_dir("pipeline-labels");
  save_graph(test, dir);
  std::vector<fs::path> opened;
  const auto previous = io::set_open_observer([&](const fs::path& p) { opened.push_back(p); });
  const Graph unlabeled = load_graph_dir(dir, false);
  const ScoreResult s = score_graph(run.p, unlabeled);
  io::set_open_observer(previous);
  for (const auto& p : opened) EXPECT_NE(p.filename(), "labels.txt");

  fs::remove(dir / "labels.txt");
  const ScoreResult again = score_graph(run.p, load_graph_dir(dir, false));
  EXPECT_EQ(s.scores, again.scores);
  EXPECT_EQ(s.scores, score_graph(run.p, test).scores);
}

TEST(Pipeline, IsomorphicCopiesScoreAlike) {
  const auto& run = shared_run();
  const Graph test = synthetic(11, 4);
  std::vector<int> perm(test.num_nodes());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = make_rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  const ScoreResult a = score_graph(run.p, test);
  const ScoreResult b = score_graph(run.p, permute_nodes(test, perm));
  for (int v = 0; v < test.num_nodes(); ++v) {
    EXPECT_NEAR(a.scores[v], b.scores[perm[v]], 1e-9 * (1.0 + std::abs(a.scores[v])));
  }
}

TEST(Pipeline, TrainingGraphWithOwnKeys) {
  // With one training graph the key bank is exactly that graph's key rows.
  PipelineConfig c = tiny_config();
  c.R = 0;
  const std::vector<Graph> train = {synthetic(3)};
  const TrainedPipeline p = train_pipeline(c, train);
  Rng rng = make_rng(c.seed, "router-keys");
  const auto ctx = GraphContext::build(train[0], c.d);
  const NodeSet keys = sample_keys(train[0], c.key_fraction, rng);
  const ScoreResult s = score_graph_with_keys(p, train[0], keys);
  const NodeSet queries = complement(train[0].num_nodes(), keys);
  for (std::size_t e = 0; e < p.experts.size(); ++e) {
    const Matrix h = encode(p.experts[e], *ctx);
    EXPECT_EQ(p.key_bank[e], Matrix(h(keys, Eigen::all)));
    const Matrix hq = h(queries, Eigen::all);
    const auto expected = anomaly_scores(hq, reconstruct(p.experts[e], hq, h(keys, Eigen::all)));
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(s.expert_scores(static_cast<Index>(i), static_cast<Index>(e)), expected[i]);
    }
  }
  // Scoring against the bank reproduces the own-key scores on query rows.
  const ScoreResult full = score_graph(p, train[0]);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    EXPECT_EQ(full.scores[queries[i]], s.scores[i]);
  }
}

TEST(Evaluate, PerfectScorerAndRoutingFrequency) {
  const auto& run = shared_run();
  const Graph test = synthetic(13, 4);
  ScoreResult s = score_graph(run.p, test);
  for (int v = 0; v < test.num_nodes(); ++v) s.scores[v] = test.labels()[v];
  const GraphMetrics m = evaluate(s, test.labels());
  EXPECT_EQ(m.auroc, 1.0);
  EXPECT_EQ(m.routing_frequency.size(), 4);
  EXPECT_NEAR(m.routing_frequency.sum(), 1.0, 1e-12);
  EXPECT_EQ(m.expert_auroc.size(), 4u);
}

TEST(Evaluate, SingleClassIsUndefined) {
  ScoreResult s;
  s.scores = {0.1, 0.2};
  s.expert_scores = Matrix::Zero(2, 1);
  s.routing.weights = Matrix::Ones(2, 1);
  const GraphMetrics m = evaluate(s, std::vector<int>{0, 0});
  EXPECT_FALSE(m.auroc.has_value());
  EXPECT_THROW(evaluate(s, std::vector<int>{0}), ShapeError);
}

TEST(Pipeline, StageFailureNamesStage) {
  PipelineConfig c = tiny_config();
  const std::vector<Graph> train = {synthetic(1).without_labels()};
  try {
    train_pipeline(c, train);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("align"), std::string::npos);
  }
}

TEST(Pipeline, AblationTogglesChangeOneMechanism) {
  const auto& run = shared_run();
  TrainOptions opt;
  opt.experts = &run.p.experts;

  PipelineConfig c = tiny_config();
  c.ablation.select = false;
  const TrainedPipeline no_select = train_pipeline(c, run.train, opt);
  EXPECT_EQ(no_select.rounds[0].kept.size(), 26u);
  EXPECT_TRUE(no_select.rounds[0].stats.mean.empty());

  c = tiny_config();
  c.ablation.memory = false;
  EXPECT_FALSE(train_pipeline(c, run.train, opt).router.use_memory);

  c = tiny_config();
  c.d_e = 5;
  EXPECT_THROW(train_pipeline(c, run.train, opt), Error);
}

}  // namespace
}  // namespace evofg
