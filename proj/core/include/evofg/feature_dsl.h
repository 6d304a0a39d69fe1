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

#ifndef EVOFG_FEATURE_DSL_H_
#define EVOFG_FEATURE_DSL_H_

#include <string>
#include <vector>

#include "evofg/error.h"
#include "evofg/feature_expr.h"
#include "evofg/feature_table.h"
#include "evofg/matrix.h"

namespace evofg {

inline constexpr double kDslEpsilon = 1e-8;
inline constexpr double kDslClamp = 1e6;

// Thrown when an operator is given the wrong number of arguments or an
// argument list contains repeats.
class ArityError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// The only way to build a FeatureExpr. The category is that of the first
// argument. Throws ReferenceError for unknown columns and ArityError for
// arity or distinctness violations.
FeatureExpr make_expr(Op op, std::vector<std::string> args, const RouterFeatureTable& table);

// Re-checks an existing expression against a table (same errors).
void validate_expr(const FeatureExpr& e, const RouterFeatureTable& table);

// Elementwise evaluation with epsilon guards; the output is clamped to
// [-1e6, 1e6] and always finite for finite input.
Vector eval_expr(const FeatureExpr& e, const RouterFeatureTable& table);

// Evaluates `e` and appends it as a new active column named e.to_string().
void append_expr(const FeatureExpr& e, RouterFeatureTable& table);

}  // namespace evofg

#endif  // EVOFG_FEATURE_DSL_H_
