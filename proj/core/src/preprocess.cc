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

#include "evofg/preprocess.h"

#include <algorithm>
#include <numeric>

#include "evofg/error.h"
#include "evofg/numeric.h"

namespace evofg {

std::vector<double> smoothness_scores(const Matrix& xhat, const Graph& g) {
  if (xhat.rows() != g.num_nodes()) {
    throw ShapeError("smoothness_scores: row count != node count");
  }
  if (g.num_edges() == 0) {
    throw ContractError("smoothness score undefined on edgeless graph '" + g.name() + "'");
  }
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(xhat.cols());
  for (const Edge& e : g.edges()) {
    acc += (xhat.row(e.u) - xhat.row(e.v)).array().square().matrix();
  }
  acc /= -static_cast<double>(g.num_edges());
  return {acc.data(), acc.data() + acc.size()};
}

AlignedFeatures sort_by_smoothness(const Matrix& xhat, const Graph& g) {
  const auto s = smoothness_scores(xhat, g);
  std::vector<int> perm(s.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return s[a] < s[b]; });
  AlignedFeatures out;
  out.matrix.resize(xhat.rows(), xhat.cols());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    out.matrix.col(static_cast<Index>(k)) = xhat.col(perm[k]);
    out.smoothness.push_back(s[perm[k]]);
  }
  out.permutation = std::move(perm);
  out.source = g.name();
  return out;
}

AlignedFeatures align(const Graph& g, int d) {
  const PcaResult pca = pca_project(g.features(), d);
  AlignedFeatures out = sort_by_smoothness(pca.projection, g);
  out.rank_deficient = pca.rank_deficient;
  return out;
}

}  // namespace evofg
