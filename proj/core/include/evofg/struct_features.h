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

#ifndef EVOFG_STRUCT_FEATURES_H_
#define EVOFG_STRUCT_FEATURES_H_

#include <cstdint>

#include "evofg/feature_table.h"
#include "evofg/graph.h"
#include "evofg/matrix.h"

namespace evofg {

inline constexpr double kPageRankDamping = 0.85;
inline constexpr double kPageRankTolerance = 1e-10;
inline constexpr int kPageRankMaxIterations = 200;

Vector pagerank(const Graph& g);

struct BetweennessOptions {
  // 0 = exact. Otherwise sample this many distinct sources (>= 64) and
  // rescale by N / sources; the result is approximate.
  int sample_sources = 0;
  std::uint64_t seed = 0;
};

// Brandes betweenness, normalized by (N-1)(N-2)/2. N < 3 gives zeros.
Vector betweenness(const Graph& g, const BetweennessOptions& opt = {});

// Component-scaled closeness; isolated nodes get 0.
Vector closeness(const Graph& g);

struct ScopeColumns {
  Vector target;
  Vector ego_mean;
  Vector global_mean;
  Vector ego_rank;
  Vector global_rank;
};

// Mid-rank fraction with ties counted half. Values within a relative 1e-12
// of each other are treated as ties so that symmetric nodes, whose
// centralities differ only by summation order, rank equally.
ScopeColumns scope_expand(const Vector& values, const Graph& g);

// Mean cosine similarity between v and its distance-exactly-k shell.
Vector khop_similarity(const Graph& g, const Matrix& xtilde, int k);

struct EdgeSimilarity {
  double value = 0.0;
  bool edgeless = false;
};
EdgeSimilarity edge_avg_similarity(const Graph& g, const Matrix& xtilde);

struct PrimitiveOptions {
  // Betweenness switches to source sampling above this node count.
  int exact_betweenness_limit = 5000;
  int sample_sources = 64;
  std::uint64_t seed = 0;
};

// The 23 primitive columns in canonical order, all active.
RouterFeatureTable compute_primitives(const Graph& g, const Matrix& xtilde,
                                      const PrimitiveOptions& opt = {});

}  // namespace evofg

#endif  // EVOFG_STRUCT_FEATURES_H_
