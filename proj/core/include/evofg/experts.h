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

#ifndef EVOFG_EXPERTS_H_
#define EVOFG_EXPERTS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "evofg/autodiff.h"
#include "evofg/graph.h"
#include "evofg/graph_context.h"
#include "evofg/matrix.h"
#include "evofg/optimizer.h"
#include "evofg/rng.h"

namespace evofg {

enum class Arch { kLowpass, kAttention, kCheby, kGpr };
inline constexpr std::array<Arch, 4> kAllArchs = {Arch::kLowpass, Arch::kAttention, Arch::kCheby,
                                                  Arch::kGpr};

std::string_view to_string(Arch a);
std::optional<Arch> parse_arch(std::string_view s);

struct ExpertDims {
  int input = 32;      // d
  int hidden = 32;     // d_e, shared by all experts of an ensemble
  int attention = 32;  // d'
  friend bool operator==(const ExpertDims&, const ExpertDims&) = default;
};

inline constexpr double kGprAlpha = 0.1;
inline constexpr double kAttentionSlope = 0.2;

// Parameter names by architecture, always followed by "Wq", "Wk":
//   LOWPASS   W0
//   ATTENTION W0, a_self, a_nbr
//   CHEBY     W0, W1, W2
//   GPR       W0, gamma (1 x 11)
struct ExpertModel {
  Arch arch = Arch::kLowpass;
  ExpertDims dims;
  ParameterList params;
  std::uint64_t seed = 0;
  bool trained = false;
  std::vector<double> loss_trace;
};

ExpertModel init_expert(Arch arch, ExpertDims dims, std::uint64_t seed);

// Tape forms. `bound` is model.params bound to the tape of `x`-side nodes.
ad::Var encode(const ExpertModel& m, std::span<const ad::Var> bound, const GraphContext& ctx);
ad::Var reconstruct(const ExpertModel& m, std::span<const ad::Var> bound, const ad::Var& hq,
                    const ad::Var& hk);
ad::Var anomaly_loss(const ad::Var& hq, const ad::Var& hrec, std::span<const int> y);

// Node embeddings H (N x d_e).
Matrix encode(const ExpertModel& m, const GraphContext& ctx);
// softmax((Hq Wq)(Hk Wk)^T / sqrt(d')) Hk. Throws ContractError on empty keys.
Matrix reconstruct(const ExpertModel& m, const Matrix& hq, const Matrix& hk);
// Same with keys and queries given as disjoint row sets of H.
Matrix cross_attn_reconstruct(const ExpertModel& m, const Matrix& h, const NodeSet& keys,
                              const NodeSet& queries);

// Row-wise l2 reconstruction discrepancy.
std::vector<double> anomaly_scores(const Matrix& hq, const Matrix& hrec);
// Mean over rows of 1 - cos (normal) or max(0, cos) (anomaly).
double anomaly_loss(const Matrix& hq, const Matrix& hrec, std::span<const int> y);

// Random ceil(fraction * #normal) normal nodes, at least one; sorted.
NodeSet sample_keys(const Graph& g, double fraction, Rng& rng);
NodeSet complement(int num_nodes, const NodeSet& set);
std::vector<int> gather(std::span<const int> values, const NodeSet& rows);

// Loss of one keys/queries split, with the flattened parameter gradient
// written to `grad` when non-null.
double expert_loss(const ExpertModel& m, const GraphContext& ctx, const NodeSet& keys,
                   const NodeSet& queries, std::vector<double>* grad);

struct ExpertTrainConfig {
  int epochs = 10;
  double lr = 1e-5;
  double weight_decay = 5e-5;
  double key_fraction = 0.1;
};

// 40 for GPR, 10 otherwise.
int default_expert_epochs(Arch arch);

// Full-batch AdamW: each epoch resamples keys per graph, averages the graph
// losses and takes one step. Throws NumericError on a non-finite loss.
ExpertModel pretrain_expert(Arch arch, std::span<const GraphContext* const> graphs,
                            ExpertDims dims, const ExpertTrainConfig& cfg, std::uint64_t seed);

// Q column for one expert: the top-k scores are predicted anomalous, with k
// the number of anomalies in y, ties going to the lower index; entry is 1
// where the prediction matches y.
std::vector<int> expert_correctness(std::span<const double> scores, std::span<const int> y);
// N x E version, one column per expert.
Matrix expert_correctness(const Matrix& scores, std::span<const int> y);

}  // namespace evofg

#endif  // EVOFG_EXPERTS_H_
