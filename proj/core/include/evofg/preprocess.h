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

#ifndef EVOFG_PREPROCESS_H_
#define EVOFG_PREPROCESS_H_

#include <string>
#include <vector>

#include "evofg/graph.h"
#include "evofg/matrix.h"

namespace evofg {

// PCA-projected attributes with columns sorted by ascending smoothness, i.e.
// most heterophilous (high-frequency) direction first.
struct AlignedFeatures {
  Matrix matrix;                    // N x d
  std::vector<double> smoothness;   // per output column, non-decreasing
  std::vector<int> permutation;     // output column k = PCA column permutation[k]
  std::string source;
  bool rank_deficient = false;
};

// s_k = -(1/|E|) sum over undirected edges of (X_ik - X_jk)^2.
// Throws ContractError on an edgeless graph.
std::vector<double> smoothness_scores(const Matrix& xhat, const Graph& g);

// Stable ascending sort of the columns of `xhat` by smoothness.
AlignedFeatures sort_by_smoothness(const Matrix& xhat, const Graph& g);

AlignedFeatures align(const Graph& g, int d);

}  // namespace evofg

#endif  // EVOFG_PREPROCESS_H_
