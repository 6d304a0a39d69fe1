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

#include <cstdlib>
#include <filesystem>

#include <fmt/format.h>

#include "evofg/error.h"
#include "evofg/feature_dsl.h"
#include "evofg/llm_client.h"
#include "evofg/struct_features.h"
#include "test_support.h"

namespace evofg {
namespace {

const std::filesystem::path kLlmFixtures = std::filesystem::path(EVOFG_FIXTURE_DIR) / "llm";

RouterFeatureTable primitive_table() {
  Rng rng = make_rng(41);
  const Graph g = testing::random_graph(30, 0.15, rng, 4);
  return compute_primitives(g, g.features());
}

ChatClient fixture_client(const std::string& name) {
  ChatOptions opt;
  opt.backoff = std::chrono::milliseconds(1);
  return ChatClient(std::make_unique<FixtureTransport>(kLlmFixtures / name), opt);
}

LlmErrorKind propose_error(const std::string& fixture) {
  const RouterFeatureTable t = primitive_table();
  ChatClient client = fixture_client(fixture);
  GenerationContext ctx{&t, {}, {}, 1};
  try {
    propose_expr(client, ctx);
  } catch (const LlmError& e) {
    return e.kind();
  }
  ADD_FAILURE() << fixture << " did not fail";
  return LlmErrorKind::kNetwork;
}

TEST(LlmClient, ValidFixtureYieldsExpression) {
  const RouterFeatureTable t = primitive_table();
  ChatClient client = fixture_client("valid");
  GenerationContext ctx{&t, {}, {}, 1};
  const FeatureExpr e = propose_expr(client, ctx);
  EXPECT_EQ(e.to_string(), "BINARY_DIV(PR_t,PR_ego_mean)");
  EXPECT_EQ(e.category, Category::kPageRank);
}

TEST(LlmClient, CodeFenceIsTolerated) {
  const RouterFeatureTable t = primitive_table();
  ChatClient client = fixture_client("fenced");
  GenerationContext ctx{&t, {}, {}, 1};
  EXPECT_EQ(propose_expr(client, ctx).to_string(), "LOG1P(BC_t)");
}

TEST(LlmClient, TypedErrors) {
  EXPECT_EQ(propose_error("arity"), LlmErrorKind::kArity);
  EXPECT_EQ(propose_error("unknown_column"), LlmErrorKind::kUnknownColumn);
  EXPECT_EQ(propose_error("malformed"), LlmErrorKind::kMalformedDecision);
  EXPECT_EQ(propose_error("malformed_body"), LlmErrorKind::kMalformedResponse);
  EXPECT_EQ(propose_error("cross_category"), LlmErrorKind::kInvalidDecision);
  EXPECT_EQ(propose_error("status"), LlmErrorKind::kHttpStatus);
}

TEST(LlmClient, StatusErrorsAreRetried) {
  ChatClient client = fixture_client("status");
  EXPECT_THROW(client.complete({{"user", "hi"}}), LlmError);
  auto& transport = dynamic_cast<FixtureTransport&>(client.transport());
  EXPECT_EQ(transport.requests().size(), 3u);  // one call plus two retries
  EXPECT_EQ(transport.remaining(), 0u);

  ChatClient recovering = fixture_client("retry_then_ok");
  EXPECT_NE(recovering.complete({{"user", "hi"}}).find("CC_global_mean"), std::string::npos);
}

TEST(LlmClient, ExhaustedFixturesAreNotRetried) {
  ChatClient client = fixture_client("valid");
  client.complete({{"user", "a"}});
  try {
    client.complete({{"user", "b"}});
    FAIL();
  } catch (const LlmError& e) {
    EXPECT_EQ(e.kind(), LlmErrorKind::kFixturesExhausted);
    EXPECT_FALSE(e.retryable());
  }
}

TEST(LlmClient, RequestBodyShape) {
  ChatRequest req{"m", {{"system", "s"}, {"user", "u"}}, 0.7, 256};
  const std::string body = req.to_json();
  for (const char* key : {"\"model\"", "\"messages\"", "\"temperature\"", "\"max_tokens\"", "\"role\"",
                          "\"content\""}) {
    EXPECT_NE(body.find(key), std::string::npos) << key;
  }
}

TEST(LlmClient, ApiKeyComesFromEnvironment) {
  ::setenv("EVOFG_LLM_API_KEY", "test-key", 1);
  EXPECT_EQ(api_key_from_env(), "test-key");
  ::unsetenv("EVOFG_LLM_API_KEY");
  EXPECT_EQ(api_key_from_env(), "");
}

TEST(Prompt, SchemaOnlyNeverData) {
  RouterFeatureTable t = primitive_table();
  t.set_active("Deg_t", false);
  GenerationContext ctx{&t, {"LOG1P(BC_t)"}, {"SQUARE(PR_t)"}, 2};
  const auto messages = build_prompt(ctx);
  ASSERT_EQ(messages.size(), 2u);
  std::string all;
  for (const auto& m : messages) all += m.content;
  EXPECT_NE(all.find(kPromptVersion), std::string::npos);
  EXPECT_NE(all.find("PR_ego_mean"), std::string::npos);
  EXPECT_EQ(all.find("Deg_t"), std::string::npos);
  EXPECT_NE(all.find("LOG1P(BC_t)"), std::string::npos);
  EXPECT_NE(all.find("SQUARE(PR_t)"), std::string::npos);
  EXPECT_NE(all.find("MULTI_VAR"), std::string::npos);
  // No cell value of the table appears in the prompt.
  for (Index i = 0; i < t.matrix().size(); ++i) {
    const double v = t.matrix().data()[i];
    if (v == std::floor(v) && std::abs(v) < 100) continue;  // small integers collide with prose
    for (const std::string& s : {fmt::format("{}", v), fmt::format("{:.6f}", v), fmt::format("{:.4g}", v)}) {
      ASSERT_EQ(all.find(s), std::string::npos) << s;
    }
  }
}

TEST(ParseDecision, Strict) {
  EXPECT_THROW(parse_decision("[1,2]"), LlmError);
  EXPECT_THROW(parse_decision(R"({"category":"PageRank","features":["PR_t"],"operator":"LOG","extra":1})"),
               LlmError);
  EXPECT_THROW(parse_decision(R"({"category":"PageRank","features":"PR_t","operator":"LOG"})"), LlmError);
  EXPECT_THROW(parse_decision("```json\n{}"), LlmError);
  const GenerationDecision d =
      parse_decision(R"({"category":"Topology","features":["Deg_t"],"operator":"LOG1P"})");
  EXPECT_EQ(d.feature_names, std::vector<std::string>{"Deg_t"});
  EXPECT_TRUE(d.rationale.empty());
}

}  // namespace
}  // namespace evofg
