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

#include "evofg/feature_table.h"

#include <cmath>
#include <cstdio>

#include "evofg/error.h"
#include "evofg/io.h"

namespace evofg {

namespace {

constexpr std::array<std::string_view, kNumCategories> kCategoryNames = {
    "PageRank", "Betweenness", "Closeness", "Similarity", "Topology"};

constexpr std::array<std::string_view, kNumOps> kOpNames = {
    "LOG1P",      "LOG",        "SQRT",       "SQUARE",
    "CUBE",       "RECIPROCAL", "SIGMOID",    "BINARY_SUB",
    "BINARY_DIV", "BINARY_DIFF_OVER_SUM",     "MULTI_MEAN", "MULTI_VAR"};

}  // namespace

std::string_view to_string(Category c) { return kCategoryNames[static_cast<int>(c)]; }

std::optional<Category> parse_category(std::string_view s) {
  for (int i = 0; i < kNumCategories; ++i) {
    if (kCategoryNames[i] == s) return static_cast<Category>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Op op) { return kOpNames[static_cast<int>(op)]; }

std::optional<Op> parse_op(std::string_view s) {
  for (int i = 0; i < kNumOps; ++i) {
    if (kOpNames[i] == s) return static_cast<Op>(i);
  }
  return std::nullopt;
}

Arity arity_of(Op op) {
  switch (op) {
    case Op::kBinarySub:
    case Op::kBinaryDiv:
    case Op::kBinaryDiffOverSum:
      return Arity::kBinary;
    case Op::kMultiMean:
    case Op::kMultiVar:
      return Arity::kMulti;
    default:
      return Arity::kUnary;
  }
}

std::vector<Op> ops_for_arity(int k) {
  const Arity want = k <= 1 ? Arity::kUnary : (k == 2 ? Arity::kBinary : Arity::kMulti);
  std::vector<Op> out;
  for (int i = 0; i < kNumOps; ++i) {
    if (arity_of(static_cast<Op>(i)) == want) out.push_back(static_cast<Op>(i));
  }
  return out;
}

bool arity_accepts(Op op, std::size_t k) {
  switch (arity_of(op)) {
    case Arity::kUnary: return k == 1;
    case Arity::kBinary: return k == 2;
    case Arity::kMulti: return k >= 3;
  }
  return false;
}

std::string FeatureExpr::to_string() const {
  std::string s(evofg::to_string(op));
  s += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) s += ',';
    s += args[i];
  }
  s += ')';
  return s;
}

const std::array<std::string_view, kNumPrimitives>& primitive_names() {
  static constexpr std::array<std::string_view, kNumPrimitives> kNames = {
      "PR_t",         "PR_ego_mean",  "PR_global_mean", "PR_ego_rank", "PR_global_rank",
      "BC_t",         "BC_ego_mean",  "BC_global_mean", "BC_ego_rank", "BC_global_rank",
      "CC_t",         "CC_ego_mean",  "CC_global_mean", "CC_ego_rank", "CC_global_rank",
      "Sim_edge_avg", "Sim_1hop",     "Sim_2hop",       "Sim_3hop",    "Sim_4hop",
      "Sim_5hop",     "Deg_t",        "Ego_size"};
  return kNames;
}

Category primitive_category(int index) {
  if (index < 5) return Category::kPageRank;
  if (index < 10) return Category::kBetweenness;
  if (index < 15) return Category::kCloseness;
  if (index < 21) return Category::kSimilarity;
  return Category::kTopology;
}

RouterFeatureTable::RouterFeatureTable(int num_nodes)
    : num_nodes_(num_nodes), matrix_(num_nodes, 0) {}

int RouterFeatureTable::num_active() const {
  int n = 0;
  for (bool a : active_) n += a;
  return n;
}

void RouterFeatureTable::add_column(std::string name, Category category, const Vector& values,
                                    std::optional<FeatureExpr> provenance, bool active) {
  if (values.size() != num_nodes_) {
    throw ShapeError("column '" + name + "' has " + std::to_string(values.size()) +
                     " rows, table has " + std::to_string(num_nodes_));
  }
  if (find(name)) throw ContractError("duplicate feature column '" + name + "'");
  if (!values.allFinite()) throw NumericError("column '" + name + "' is not finite");
  matrix_.conservativeResize(num_nodes_, matrix_.cols() + 1);
  matrix_.col(matrix_.cols() - 1) = values;
  names_.push_back(std::move(name));
  categories_.push_back(category);
  provenance_.push_back(std::move(provenance));
  active_.push_back(active);
}

std::optional<int> RouterFeatureTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

int RouterFeatureTable::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ReferenceError("unknown feature column '" + std::string(name) + "'");
}

Vector RouterFeatureTable::column(std::string_view name) const {
  return matrix_.col(index_of(name));
}

void RouterFeatureTable::set_active(const std::vector<bool>& mask) {
  if (mask.size() != active_.size()) throw ShapeError("active mask size mismatch");
  active_ = mask;
}

void RouterFeatureTable::set_active(std::string_view name, bool on) {
  active_[index_of(name)] = on;
}

std::vector<int> RouterFeatureTable::active_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<std::string> RouterFeatureTable::active_names() const {
  std::vector<std::string> out;
  for (int i : active_indices()) out.push_back(names_[i]);
  return out;
}

std::array<std::vector<std::string>, kNumCategories> RouterFeatureTable::active_by_category() const {
  std::array<std::vector<std::string>, kNumCategories> out;
  for (int i : active_indices()) out[static_cast<int>(categories_[i])].push_back(names_[i]);
  return out;
}

Matrix RouterFeatureTable::standardized(const std::vector<int>& columns) const {
  Matrix out(num_nodes_, static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const auto col = matrix_.col(columns[k]);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().mean();
    const double sd = std::sqrt(var);
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
      out.col(static_cast<Index>(k)).setZero();
    } else {
      out.col(static_cast<Index>(k)) = ((col.array() - mean) / sd).matrix();
    }
  }
  return out;
}

void RouterFeatureTable::write_text(const std::filesystem::path& path) const {
  auto out = io::open_output(path);
  for (std::size_t i = 0; i < names_.size(); ++i) out << (i ? "\t" : "") << names_[i];
  out << '\n';
  char buf[32];
  for (Index r = 0; r < matrix_.rows(); ++r) {
    for (Index c = 0; c < matrix_.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", matrix_(r, c));
      out << (c ? "\t" : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace evofg
