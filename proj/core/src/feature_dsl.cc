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

#include "evofg/feature_dsl.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "evofg/error.h"

namespace evofg {

namespace {

double guard(double den) {
  const double mag = std::max(std::abs(den), kDslEpsilon);
  return den < 0.0 ? -mag : mag;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

FeatureExpr make_expr(Op op, std::vector<std::string> args, const RouterFeatureTable& table) {
  FeatureExpr e;
  e.op = op;
  e.args = std::move(args);
  if (e.args.empty()) throw ArityError(std::string(to_string(op)) + " needs arguments");
  e.category = table.categories()[table.index_of(e.args.front())];
  validate_expr(e, table);
  return e;
}

void validate_expr(const FeatureExpr& e, const RouterFeatureTable& table) {
  for (const auto& a : e.args) table.index_of(a);
  if (!arity_accepts(e.op, e.args.size())) {
    throw ArityError(std::string(to_string(e.op)) + " does not accept " +
                     std::to_string(e.args.size()) + " argument(s)");
  }
  std::set<std::string> seen(e.args.begin(), e.args.end());
  if (seen.size() != e.args.size()) {
    throw ArityError("repeated argument in " + e.to_string());
  }
}

Vector eval_expr(const FeatureExpr& e, const RouterFeatureTable& table) {
  validate_expr(e, table);
  const int n = table.num_nodes();
  std::vector<Vector> cols;
  cols.reserve(e.args.size());
  for (const auto& a : e.args) cols.push_back(table.column(a));

  Vector out(n);
  const Vector& a = cols[0];
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    const double x = a[i];
    switch (e.op) {
      case Op::kLog1p: r = std::log1p(std::max(x, -1.0 + kDslEpsilon)); break;
      case Op::kLog: r = std::log(std::max(x, kDslEpsilon)); break;
      case Op::kSqrt: r = std::sqrt(std::max(x, 0.0)); break;
      case Op::kSquare: r = x * x; break;
      case Op::kCube: r = x * x * x; break;
      case Op::kReciprocal: r = 1.0 / guard(x); break;
      case Op::kSigmoid: r = sigmoid(x); break;
      case Op::kBinarySub: r = x - cols[1][i]; break;
      case Op::kBinaryDiv: r = x / guard(cols[1][i]); break;
      case Op::kBinaryDiffOverSum: {
        const double b = cols[1][i];
        r = (x - b) / (std::abs(x) + std::abs(b) + kDslEpsilon);
        break;
      }
      case Op::kMultiMean:
      case Op::kMultiVar: {
        double mean = 0.0;
        for (const auto& c : cols) mean += c[i];
        mean /= static_cast<double>(cols.size());
        if (e.op == Op::kMultiMean) {
          r = mean;
        } else {
          double var = 0.0;
          for (const auto& c : cols) var += (c[i] - mean) * (c[i] - mean);
          r = var / static_cast<double>(cols.size());
        }
        break;
      }
    }
    // Overflowed intermediates (e.g. CUBE of a large value) clamp like any
    // other out-of-range result.
    if (std::isnan(r)) r = 0.0;
    out[i] = std::clamp(r, -kDslClamp, kDslClamp);
  }
  return out;
}

void append_expr(const FeatureExpr& e, RouterFeatureTable& table) {
  table.add_column(e.to_string(), e.category, eval_expr(e, table), e);
}

}  // namespace evofg
