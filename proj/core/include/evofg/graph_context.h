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

#ifndef EVOFG_GRAPH_CONTEXT_H_
#define EVOFG_GRAPH_CONTEXT_H_

#include <array>
#include <memory>
#include <vector>

#include "evofg/autodiff.h"
#include "evofg/graph.h"
#include "evofg/matrix.h"

namespace evofg {

inline constexpr int kChebyshevOrder = 3;
inline constexpr int kGprDepth = 10;

// Per-graph constants shared by the experts and the router: aligned
// features and the propagation operators built from the adjacency. Held by
// unique_ptr so that tapes may keep references to the sparse operators.
struct GraphContext {
  Graph graph;
  Matrix features;             // X~, N x d
  SparseMatrix adj_self_norm;  // D^-1/2 (A + I) D^-1/2
  SparseMatrix adj_norm;       // D^-1/2 A D^-1/2, zero rows for isolated nodes
  SparseMatrix residual;       // I - D^-1 A, identity rows for isolated nodes
  ad::Neighborhoods neighborhoods;
  std::array<Matrix, kChebyshevOrder> cheb_basis;  // T_k(L~) X~ with L~ = -adj_norm
  std::array<Matrix, kGprDepth + 1> gpr_basis;     // adj_self_norm^t X~
  Matrix lowpass;                                  // adj_self_norm X~

  int num_nodes() const { return graph.num_nodes(); }
  int feature_dim() const { return static_cast<int>(features.cols()); }

  // Uses `features` as X~ directly.
  static std::unique_ptr<GraphContext> from_features(Graph g, Matrix features);
  // Aligns g's raw attributes to d dimensions first.
  static std::unique_ptr<GraphContext> build(Graph g, int d);
};

}  // namespace evofg

#endif  // EVOFG_GRAPH_CONTEXT_H_
