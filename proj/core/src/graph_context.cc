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

#include "evofg/graph_context.h"

#include <cmath>

#include "evofg/error.h"
#include "evofg/preprocess.h"

namespace evofg {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix from_triplets(int n, const std::vector<Triplet>& t) {
  SparseMatrix s(n, n);
  s.setFromTriplets(t.begin(), t.end());
  s.makeCompressed();
  return s;
}

}  // namespace

std::unique_ptr<GraphContext> GraphContext::from_features(Graph g, Matrix features) {
  const int n = g.num_nodes();
  if (features.rows() != n) throw ShapeError("context features do not match node count");
  if (!features.allFinite()) throw NumericError("context features are not finite");
  auto ctx = std::make_unique<GraphContext>();
  ctx->features = std::move(features);

  std::vector<Triplet> self_norm, norm, residual;
  for (int v = 0; v < n; ++v) {
    const int deg = g.degree(v);
    const double inv_self = 1.0 / std::sqrt(deg + 1.0);
    self_norm.emplace_back(v, v, inv_self * inv_self);
    residual.emplace_back(v, v, 1.0);
    for (int u : g.neighbors(v)) {
      self_norm.emplace_back(v, u, inv_self / std::sqrt(g.degree(u) + 1.0));
      norm.emplace_back(v, u, 1.0 / std::sqrt(static_cast<double>(deg) * g.degree(u)));
      residual.emplace_back(v, u, -1.0 / deg);
    }
  }
  ctx->adj_self_norm = from_triplets(n, self_norm);
  ctx->adj_norm = from_triplets(n, norm);
  ctx->residual = from_triplets(n, residual);

  auto& nb = ctx->neighborhoods;
  nb.offsets.assign(1, 0);
  for (int v = 0; v < n; ++v) {
    nb.indices.push_back(v);
    for (int u : g.neighbors(v)) nb.indices.push_back(u);
    nb.offsets.push_back(static_cast<int>(nb.indices.size()));
  }

  const Matrix& x = ctx->features;
  ctx->cheb_basis[0] = x;
  ctx->cheb_basis[1] = -(ctx->adj_norm * x);
  for (int k = 2; k < kChebyshevOrder; ++k) {
    ctx->cheb_basis[k] = -2.0 * (ctx->adj_norm * ctx->cheb_basis[k - 1]) - ctx->cheb_basis[k - 2];
  }
  ctx->gpr_basis[0] = x;
  for (int t = 1; t <= kGprDepth; ++t) {
    ctx->gpr_basis[t] = ctx->adj_self_norm * ctx->gpr_basis[t - 1];
  }
  ctx->lowpass = ctx->gpr_basis[1];
  ctx->graph = std::move(g);
  return ctx;
}

std::unique_ptr<GraphContext> GraphContext::build(Graph g, int d) {
  AlignedFeatures aligned = align(g, d);
  return from_features(std::move(g), std::move(aligned.matrix));
}

}  // namespace evofg
