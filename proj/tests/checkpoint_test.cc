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

#include <filesystem>
#include <fstream>

#include "evofg/checkpoint.h"
#include "evofg/error.h"
#include "test_support.h"

namespace evofg {
namespace {

namespace fs = std::filesystem;

void append_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::app);
  out << bytes;
}

TEST(Checkpoint, ExpertRoundTripIsBitExact) {
  const auto dir = testing::temp_dir("ckpt-expert");
  for (Arch a : kAllArchs) {
    ExpertModel m = init_expert(a, {5, 4, 3}, 17);
    m.trained = true;
    m.loss_trace = {0.5, 0.25};
    const fs::path path = dir / (std::string(to_string(a)) + ".ckpt");
    save_expert(m, path);
    const ExpertModel back = load_expert(path);
    EXPECT_EQ(back.arch, a);
    EXPECT_EQ(back.dims, m.dims);
    EXPECT_EQ(back.seed, 17u);
    EXPECT_TRUE(back.params == m.params);
    EXPECT_TRUE(back.trained);
  }
}

TEST(Checkpoint, RouterRoundTripKeepsFeatureNames) {
  const auto dir = testing::temp_dir("ckpt-router");
  RouterModel r = init_router({4, 3, 5, 6, 2}, 3, false);
  r.feature_names = {"Deg", "PR", "log(Deg)"};
  save_router(r, dir / "router.ckpt");
  const RouterModel back = load_router(dir / "router.ckpt");
  EXPECT_EQ(back.dims, r.dims);
  EXPECT_EQ(back.use_memory, false);
  EXPECT_EQ(back.feature_names, r.feature_names);
  EXPECT_TRUE(back.params == r.params);
}

TEST(Checkpoint, RouterWithEmptyFeatureSet) {
  const auto dir = testing::temp_dir("ckpt-router-empty");
  RouterModel r = init_router({4, 0, 5, 6, 2}, 3);
  save_router(r, dir / "router.ckpt");
  EXPECT_TRUE(load_router(dir / "router.ckpt").params == r.params);
}

TEST(Checkpoint, TensorsRoundTrip) {
  const auto dir = testing::temp_dir("ckpt-tensors");
  Rng rng = make_rng(5);
  ParameterList t;
  t.add("a", testing::random_matrix(3, 7, rng));
  t.add("empty", Matrix(0, 4));
  t.add("b", Matrix::Constant(1, 1, -0.0));
  save_tensors(t, dir / "t.ckpt");
  EXPECT_TRUE(load_tensors(dir / "t.ckpt") == t);
}

TEST(Checkpoint, RejectsCorruptFiles) {
  const auto dir = testing::temp_dir("ckpt-bad");
  const fs::path good = dir / "good.ckpt";
  save_expert(init_expert(Arch::kCheby, {3, 3, 3}, 1), good);

  const fs::path trailing = dir / "trailing.ckpt";
  fs::copy_file(good, trailing);
  append_bytes(trailing, "x");
  EXPECT_THROW(load_expert(trailing), ParseError);

  const fs::path truncated = dir / "truncated.ckpt";
  fs::copy_file(good, truncated);
  fs::resize_file(truncated, fs::file_size(good) - 5);
  EXPECT_THROW(load_expert(truncated), ParseError);

  const fs::path junk = dir / "junk.ckpt";
  std::ofstream(junk) << "not a checkpoint at all";
  EXPECT_THROW(load_expert(junk), ParseError);

  EXPECT_THROW(load_router(good), ParseError);
  EXPECT_THROW(load_expert(dir / "missing.ckpt"), Error);
}

}  // namespace
}  // namespace evofg
