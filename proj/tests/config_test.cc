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

#include <fstream>

#include "evofg/config.h"
#include "evofg/error.h"
#include "test_support.h"

namespace evofg {
namespace {

TEST(Config, Defaults) {
  const PipelineConfig c;
  EXPECT_EQ(c.d, 32);
  EXPECT_EQ(c.E, 4);
  EXPECT_DOUBLE_EQ(c.lr, 1e-5);
  EXPECT_DOUBLE_EQ(c.wd, 5e-5);
  EXPECT_EQ(c.expert_epochs, (std::array<int, 4>{10, 10, 10, 40}));
  EXPECT_EQ(c.warmup_epochs, 20);
  EXPECT_EQ(c.router_epochs, 10);
  EXPECT_EQ(c.T, 20);
  EXPECT_EQ(c.K, 20);
  EXPECT_DOUBLE_EQ(c.lambda, 0.8);
  EXPECT_EQ(c.m, 15);
  EXPECT_EQ(c.R, 3);
  EXPECT_DOUBLE_EQ(c.z_crit, 1.645);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, JsonRoundTrip) {
  PipelineConfig c;
  c.d = 16;
  c.router_lr = 3e-2;
  c.expert_epochs = {1, 2, 3, 4};
  c.llm.fixtures_dir = "fx";
  c.ablation.memory = false;
  c.seed = 99;
  const PipelineConfig back = PipelineConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(back.d, 16);
  EXPECT_EQ(back.expert_epochs[3], 4);
  EXPECT_FALSE(back.ablation.memory);
}

TEST(Config, MissingFieldsKeepDefaults) {
  const PipelineConfig c = PipelineConfig::from_json(R"({"R": 0, "lambda": 0})");
  EXPECT_EQ(c.R, 0);
  EXPECT_EQ(c.lambda, 0.0);
  EXPECT_EQ(c.T, 20);
}

TEST(Config, RejectsUnknownAndInvalid) {
  EXPECT_THROW(PipelineConfig::from_json(R"({"epochs": 3})"), ParameterError);
  EXPECT_THROW(PipelineConfig::from_json(R"({"llm": {"api_key": "x"}})"), ParameterError);
  EXPECT_THROW(PipelineConfig::from_json("[1, 2]"), ParameterError);
  EXPECT_THROW(PipelineConfig::from_json("{"), ParameterError);
  EXPECT_THROW(PipelineConfig::from_json(R"({"d": "wide"})"), ParameterError);
  for (const char* bad : {R"({"key_fraction": 1.0})", R"({"key_fraction": 0})",
                          R"({"lambda": -0.1})", R"({"T": 0})", R"({"E": 3})",
                          R"({"lr": -1})", R"({"router_lr": -1})"}) {
    EXPECT_THROW(PipelineConfig::from_json(bad), ParameterError) << bad;
  }
}

TEST(Config, ErrorNamesField) {
  try {
    PipelineConfig::from_json(R"({"mask_rate": 2})");
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_NE(std::string(e.what()).find("mask_rate"), std::string::npos);
  }
}

TEST(Config, LoadFromFile) {
  const auto path = testing::temp_dir("config") / "c.json";
  std::ofstream(path) << R"({"m": 4, "ablation": {"select": false}})";
  const PipelineConfig c = PipelineConfig::load(path);
  EXPECT_EQ(c.m, 4);
  EXPECT_FALSE(c.ablation.select);
}

}  // namespace
}  // namespace evofg
