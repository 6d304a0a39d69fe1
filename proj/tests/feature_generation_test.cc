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

#include <set>

#include "evofg/error.h"
#include "evofg/feature_dsl.h"
#include "evofg/feature_generation.h"
#include "evofg/llm_client.h"
#include "evofg/struct_features.h"
#include "test_support.h"

namespace evofg {
namespace {

const std::filesystem::path kLlmFixtures = std::filesystem::path(EVOFG_FIXTURE_DIR) / "llm";

RouterFeatureTable primitive_table() {
  Rng rng = make_rng(51);
  const Graph g = testing::random_graph(30, 0.15, rng, 4);
  return compute_primitives(g, g.features());
}

// Always proposes the same decision.
class FixedGenerator : public FeatureGenerator {
 public:
  explicit FixedGenerator(GenerationDecision d) : d_(std::move(d)) {}
  std::string name() const override { return "fixed"; }
  GenerationDecision propose(const GenerationContext&) override { return d_; }

 private:
  GenerationDecision d_;
};

TEST(DecisionToExpr, Errors) {
  const RouterFeatureTable t = primitive_table();
  EXPECT_EQ(decision_to_expr({"PageRank", {"PR_t"}, "LOG", ""}, t).to_string(), "LOG(PR_t)");
  EXPECT_THROW(decision_to_expr({"PageRank", {"PR_t"}, "EXP", ""}, t), ParameterError);
  EXPECT_THROW(decision_to_expr({"Rank", {"PR_t"}, "LOG", ""}, t), ParameterError);
  EXPECT_THROW(decision_to_expr({"PageRank", {"PR_t", "BC_t"}, "BINARY_SUB", ""}, t), ParameterError);
  EXPECT_THROW(decision_to_expr({"PageRank", {"PR_t", "PR_ego_mean"}, "LOG", ""}, t), ArityError);
  EXPECT_THROW(decision_to_expr({"PageRank", {"PR_nope"}, "LOG", ""}, t), ReferenceError);
}

TEST(RandomGenerator, DeterministicAndWellFormed) {
  const RouterFeatureTable t = primitive_table();
  GenerationContext ctx{&t, {}, {}, 1};
  RandomFeatureGenerator a(7), b(7), fa(8), fb(8);
  const GenerationReport ra = generate_candidates(a, fa, ctx, 15);
  const GenerationReport rb = generate_candidates(b, fb, ctx, 15);
  ASSERT_EQ(ra.candidates.size(), 15u);
  EXPECT_EQ(ra.candidates, rb.candidates);
  std::set<std::string> names;
  for (const auto& e : ra.candidates) {
    EXPECT_NO_THROW(validate_expr(e, t));
    EXPECT_TRUE(names.insert(e.to_string()).second);
    EXPECT_EQ(t.find(e.to_string()), std::nullopt);
    for (const auto& arg : e.args) EXPECT_EQ(t.categories()[t.index_of(arg)], e.category);
  }
  EXPECT_FALSE(ra.fell_back);
}

TEST(RandomGenerator, ThreeArgumentsPickMultiOperator) {
  const RouterFeatureTable t = primitive_table();
  GenerationContext ctx{&t, {}, {}, 1};
  RandomFeatureGenerator g(3);
  int multi = 0;
  for (int i = 0; i < 200; ++i) {
    const GenerationDecision d = g.propose(ctx);
    const Op op = *parse_op(d.op);
    EXPECT_TRUE(arity_accepts(op, d.feature_names.size()));
    if (d.feature_names.size() >= 3) {
      ++multi;
      EXPECT_TRUE(op == Op::kMultiMean || op == Op::kMultiVar);
    }
  }
  EXPECT_GT(multi, 10);
}

TEST(RandomGenerator, SkipsEmptyCategories) {
  RouterFeatureTable t(5);
  t.add_column("a", Category::kTopology, Vector::Constant(5, 1.0));
  t.add_column("b", Category::kTopology, Vector::Constant(5, 2.0));
  GenerationContext ctx{&t, {}, {}, 1};
  RandomFeatureGenerator g(1);
  for (int i = 0; i < 50; ++i) {
    const GenerationDecision d = g.propose(ctx);
    EXPECT_EQ(d.category, "Topology");
    EXPECT_LE(d.feature_names.size(), 2u);
  }
}

TEST(GenerateCandidates, DuplicatesSkipSlots) {
  const RouterFeatureTable t = primitive_table();
  GenerationContext ctx{&t, {}, {}, 1};
  FixedGenerator same({"PageRank", {"PR_t"}, "LOG", ""});
  RandomFeatureGenerator fallback(1);
  const GenerationReport r = generate_candidates(same, fallback, ctx, 3);
  EXPECT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.skipped_slots, 2);
  EXPECT_FALSE(r.fell_back);
}

TEST(GenerateCandidates, InvalidBackendFallsBack) {
  const RouterFeatureTable t = primitive_table();
  GenerationContext ctx{&t, {}, {}, 1};
  for (const char* fixture : {"arity", "unknown_column", "malformed", "malformed_body", "status"}) {
    ChatOptions opt;
    opt.backoff = std::chrono::milliseconds(1);
    ChatClient client(std::make_unique<FixtureTransport>(kLlmFixtures / fixture), opt);
    LlmFeatureGenerator llm(client);
    RandomFeatureGenerator fallback(2);
    const GenerationReport r = generate_candidates(llm, fallback, ctx, 5);
    EXPECT_TRUE(r.fell_back) << fixture;
    EXPECT_EQ(r.candidates.size(), 5u) << fixture;
    ASSERT_FALSE(r.log.empty());
    EXPECT_NE(r.log.front().find("falling back"), std::string::npos);
  }
}

TEST(GenerateCandidates, CuratedFixturesAreAllValid) {
  const RouterFeatureTable t = primitive_table();
  GenerationContext ctx{&t, {}, {}, 1};
  ChatClient client(std::make_unique<FixtureTransport>(kLlmFixtures / "full"), ChatOptions{});
  LlmFeatureGenerator llm(client);
  RandomFeatureGenerator fallback(3);
  const GenerationReport r = generate_candidates(llm, fallback, ctx, 45);
  EXPECT_FALSE(r.fell_back);
  EXPECT_EQ(r.candidates.size(), 45u);
}

}  // namespace
}  // namespace evofg
