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

#ifndef EVOFG_FEATURE_EXPR_H_
#define EVOFG_FEATURE_EXPR_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evofg {

// The five router-feature families.
enum class Category { kPageRank, kBetweenness, kCloseness, kSimilarity, kTopology };
inline constexpr int kNumCategories = 5;

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

enum class Op {
  kLog1p,
  kLog,
  kSqrt,
  kSquare,
  kCube,
  kReciprocal,
  kSigmoid,
  kBinarySub,
  kBinaryDiv,
  kBinaryDiffOverSum,
  kMultiMean,
  kMultiVar,
};
inline constexpr int kNumOps = 12;

enum class Arity { kUnary, kBinary, kMulti };

std::string_view to_string(Op op);
std::optional<Op> parse_op(std::string_view s);
Arity arity_of(Op op);
// Operators valid for k arguments (k = 1, 2, or >= 3).
std::vector<Op> ops_for_arity(int k);
bool arity_accepts(Op op, std::size_t k);

// f' = op(args...). Built only through validate_expr / make_expr so that
// arity and argument references are always consistent with a table.
struct FeatureExpr {
  Op op = Op::kLog1p;
  std::vector<std::string> args;
  Category category = Category::kPageRank;

  // Canonical column name, e.g. "BINARY_DIV(PR_t,PR_ego_mean)".
  std::string to_string() const;

  friend bool operator==(const FeatureExpr&, const FeatureExpr&) = default;
};

}  // namespace evofg

#endif  // EVOFG_FEATURE_EXPR_H_
