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

#ifndef EVOFG_ROUTER_H_
#define EVOFG_ROUTER_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evofg/autodiff.h"
#include "evofg/graph.h"
#include "evofg/graph_context.h"
#include "evofg/matrix.h"
#include "evofg/optimizer.h"
#include "evofg/rng.h"

namespace evofg {

struct RouterDims {
  int input = 32;     // d, width of X~
  int features = 23;  // d_r, router-feature width
  int memory = 32;    // d_m
  int slots = 32;     // M
  int experts = 4;    // E
  friend bool operator==(const RouterDims&, const RouterDims&) = default;
};

// Parameters: gnn_W (d x d_m), mem_node, mem_feat (M x d_m), scale (E x d_m),
// proj_W (d_r x d_m), proj_b (1 x d_m), noise_W (d_r x E).
//
// With use_memory off the router is projection-only: logits are
// (H_r W_r + b_r) scale^T and gnn_W and the memories are unused.
struct RouterModel {
  RouterDims dims;
  bool use_memory = true;
  bool train_mode = false;
  ParameterList params;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;  // columns of H_r, in order
};

RouterModel init_router(RouterDims dims, std::uint64_t seed, bool use_memory = true);

// New router-feature width: proj_W, proj_b and noise_W are redrawn; the
// other tensors are left untouched.
void reinit_projection(RouterModel& r, int width, std::uint64_t seed);

struct RoutingOutput {
  Matrix logits;          // G, N x E
  Matrix weights;         // P, N x E
  Matrix retrieval_node;  // S_n, N x M (empty without memory)
  Matrix retrieval_feat;  // S_r, N x M (empty without memory)
};

struct RouteVars {
  ad::Var logits;
  ad::Var weights;
  ad::Var retrieval_node;
  ad::Var retrieval_feat;
};

// `noise` is the N x E standard-normal draw for train mode, or null.
RouteVars route(const RouterModel& r, std::span<const ad::Var> bound, const GraphContext& ctx,
                const Matrix& hr, const Matrix* noise);

// Deterministic unless r.train_mode, in which case `rng` must be given.
RoutingOutput route(const RouterModel& r, const GraphContext& ctx, const Matrix& hr,
                    Rng* rng = nullptr);

// P-weighted sums of the per-expert matrices (Nq x d_e each).
std::pair<Matrix, Matrix> aggregate(const Matrix& weights, std::span<const Matrix> expert_h,
                                    std::span<const Matrix> expert_hrec);
ad::Var aggregate(const ad::Var& weights, std::span<const Matrix> expert_mats);

// Q rows divided by max(sum, 1); all-zero rows become uniform.
Matrix normalize_targets(const Matrix& q);
double kl_router_loss(const Matrix& q, const Matrix& logits);
ad::Var kl_router_loss(const Matrix& q, const ad::Var& logits);

double balance_loss(const Matrix& weights, const Matrix& logits);
ad::Var balance_loss(const ad::Var& weights, const ad::Var& logits);

// Per-expert mean routing weight.
RowVector routing_frequency(const Matrix& weights);

// Frozen-expert data for one training graph. Rows of hq/hrec/y/targets
// follow `queries`.
struct RouterSample {
  const GraphContext* ctx = nullptr;
  Matrix features;               // H_r, N x d_r (standardized)
  NodeSet queries;
  std::vector<Matrix> hq;        // per expert, Nq x d_e
  std::vector<Matrix> hrec;      // per expert, Nq x d_e
  std::vector<int> y;            // query labels
  Matrix targets;                // Q, Nq x E
};

Matrix mask_columns(const Matrix& hr, const std::vector<bool>& keep);

// v(S) = -mean over samples of KL(Q, G^S), deterministic routing with the
// columns outside S zeroed.
double routing_utility(const RouterModel& r, std::span<const RouterSample> samples,
                       const std::vector<bool>& subset);

// Pre-drawn randomness of one invariant-loss evaluation.
struct EnvironmentDraw {
  std::vector<std::vector<bool>> masks;  // K column masks
  std::vector<Matrix> noise;             // K noise draws (empty: no noise)
  Matrix balance_noise;                  // for the unmasked route (empty: none)
};

EnvironmentDraw draw_environments(int k, int width, int num_nodes, int experts,
                                  double mask_rate, bool with_noise, Rng& rng);

struct InvariantLoss {
  double value = 0.0;
  std::vector<double> env_losses;
};

// Mean env loss + lambda * population variance across the K environments.
ad::Var invariant_loss(const RouterModel& r, std::span<const ad::Var> bound,
                       const RouterSample& s, const EnvironmentDraw& draw, double lambda,
                       std::vector<double>* env_losses = nullptr);
InvariantLoss invariant_loss(const RouterModel& r, const RouterSample& s,
                             const EnvironmentDraw& draw, double lambda);

// Scalar objectives with flattened parameter gradients (for checks and
// training). `noise` / `draw` fix all randomness.
double kl_objective(const RouterModel& r, const RouterSample& s, const Matrix* noise,
                    std::vector<double>* grad);
double balance_objective(const RouterModel& r, const RouterSample& s, const Matrix* noise,
                         std::vector<double>* grad);
// L_IN + L_MoE for one sample.
double router_objective(const RouterModel& r, const RouterSample& s, const EnvironmentDraw& draw,
                        double lambda, std::vector<double>* grad);

struct RouterTrainConfig {
  int epochs = 10;
  double lr = 1e-5;
  double weight_decay = 5e-5;
  int environments = 20;  // K
  double lambda = 0.8;
  double mask_rate = 0.3;
  bool noise = true;
};

// KL warm-up; returns the per-epoch loss trace.
std::vector<double> warmup_router(RouterModel& r, std::span<const RouterSample> samples,
                                  const RouterTrainConfig& cfg, std::uint64_t seed);
// L_IN + L_MoE; returns the per-epoch loss trace.
std::vector<double> train_router(RouterModel& r, std::span<const RouterSample> samples,
                                 const RouterTrainConfig& cfg, std::uint64_t seed);

}  // namespace evofg

#endif  // EVOFG_ROUTER_H_
