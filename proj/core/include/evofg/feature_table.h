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

#ifndef EVOFG_FEATURE_TABLE_H_
#define EVOFG_FEATURE_TABLE_H_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evofg/feature_expr.h"
#include "evofg/matrix.h"

namespace evofg {

inline constexpr int kNumPrimitives = 23;

// Canonical primitive column names in their fixed order.
const std::array<std::string_view, kNumPrimitives>& primitive_names();
Category primitive_category(int index);

// Node-by-feature matrix of router features. Primitive columns occupy
// indices [0, 23); generated columns are appended in creation order, so an
// expression only ever references columns to its left. The active mask marks
// the current feature set; inactive columns stay evaluable.
class RouterFeatureTable {
 public:
  RouterFeatureTable() = default;
  explicit RouterFeatureTable(int num_nodes);

  int num_nodes() const { return num_nodes_; }
  int num_columns() const { return static_cast<int>(names_.size()); }
  int num_active() const;

  // Throws ContractError on duplicate names, ShapeError on length mismatch,
  // NumericError on non-finite values.
  void add_column(std::string name, Category category, const Vector& values,
                  std::optional<FeatureExpr> provenance = std::nullopt,
                  bool active = true);

  const Matrix& matrix() const { return matrix_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Category>& categories() const { return categories_; }
  const std::vector<std::optional<FeatureExpr>>& provenance() const { return provenance_; }
  const std::vector<bool>& active() const { return active_; }

  std::optional<int> find(std::string_view name) const;
  int index_of(std::string_view name) const;  // throws ReferenceError
  Vector column(std::string_view name) const;

  void set_active(const std::vector<bool>& mask);
  void set_active(std::string_view name, bool on);
  std::vector<int> active_indices() const;
  std::vector<std::string> active_names() const;
  // Active names grouped by category.
  std::array<std::vector<std::string>, kNumCategories> active_by_category() const;

  // Per-column z-score over nodes of the selected columns; zero-variance
  // columns map to 0.
  Matrix standardized(const std::vector<int>& columns) const;
  Matrix standardized_active() const { return standardized(active_indices()); }

  // Header line of column names, then one row per node.
  void write_text(const std::filesystem::path& path) const;

 private:
  int num_nodes_ = 0;
  Matrix matrix_;
  std::vector<std::string> names_;
  std::vector<Category> categories_;
  std::vector<std::optional<FeatureExpr>> provenance_;
  std::vector<bool> active_;
};

}  // namespace evofg

#endif  // EVOFG_FEATURE_TABLE_H_
