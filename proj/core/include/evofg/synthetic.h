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

#ifndef EVOFG_SYNTHETIC_H_
#define EVOFG_SYNTHETIC_H_

#include <cstdint>
#include <string>

#include "evofg/graph.h"

namespace evofg {

enum class PlantedKind { kStructural, kAttribute, kMixed };

PlantedKind parse_planted_kind(const std::string& s);
std::string to_string(PlantedKind kind);

// Knobs of the degree-corrected block model. Defaults give 4 communities,
// mean degree ~8 with a heavy-tailed degree profile, and 10% cross-community
// edges.
struct SyntheticOptions {
  int communities = 4;
  double mean_degree = 8.0;
  double degree_exponent = 2.5;  // Pareto tail of degree propensities
  double max_propensity = 10.0;
  double cross_fraction = 0.1;   // expected share of inter-community edges
  double centroid_scale = 1.0;   // std of community feature centroids
  double attribute_shift = 2.0;  // in column standard deviations
  double structural_share = 0.5;  // share of structural anomalies in kMixed
  std::string name = "synthetic";
};

// Degree-corrected stochastic block model with planted anomalies:
//   structural - the node's edges are replaced by the same number of edges to
//                nodes drawn uniformly from all communities;
//   attribute  - a random half of its coordinates is shifted by
//                attribute_shift column standard deviations;
//   mixed      - anomalies are split between the two kinds.
// Exactly floor(anomaly_rate * n_nodes) anomalies are planted. Pure function
// of its arguments.
Graph gen_synthetic(int n_nodes, int n_features, double anomaly_rate,
                    std::uint64_t structure_seed, PlantedKind planted_kind,
                    const SyntheticOptions& options = {});

}  // namespace evofg

#endif  // EVOFG_SYNTHETIC_H_
