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

#include "evofg/router.h"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "evofg/error.h"
#include "evofg/experts.h"

namespace evofg {

namespace {

const ad::Var& param(const RouterModel& r, std::span<const ad::Var> bound, const char* name) {
  return bound[r.params.index_of(name)];
}

Matrix normal_matrix(Index rows, Index cols, double scale, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = scale * standard_normal(rng);
  return m;
}

void check_width(const RouterModel& r, const GraphContext& ctx, const Matrix& hr) {
  if (hr.cols() != r.dims.features) {
    throw ShapeError("router expects " + std::to_string(r.dims.features) +
                     " feature columns, got " + std::to_string(hr.cols()));
  }
  if (hr.rows() != ctx.num_nodes()) throw ShapeError("router features do not match node count");
  if (ctx.feature_dim() != r.dims.input) throw ShapeError("router input width mismatch");
}

// Runs `fn(tape, bound)` -> loss on a fresh tape; writes the gradient.
template <typename Fn>
double with_gradient(const RouterModel& r, std::vector<double>* grad, Fn fn) {
  ad::Tape tape;
  const auto bound = r.params.bind(tape, grad != nullptr);
  const ad::Var loss = fn(bound);
  if (grad) {
    tape.backward(loss);
    *grad = gather_gradient(tape, bound);
  }
  return loss.scalar();
}

}  // namespace

RouterModel init_router(RouterDims dims, std::uint64_t seed, bool use_memory) {
  if (dims.input < 1 || dims.features < 0 || dims.memory < 1 || dims.slots < 1 ||
      dims.experts < 1) {
    throw ParameterError("invalid router dimensions");
  }
  RouterModel r;
  r.dims = dims;
  r.use_memory = use_memory;
  r.seed = seed;
  Rng rng = make_rng(seed, "router");
  const double mem_scale = 1.0 / std::sqrt(static_cast<double>(dims.memory));
  r.params.add("gnn_W", glorot(dims.input, dims.memory, rng));
  r.params.add("mem_node", normal_matrix(dims.slots, dims.memory, mem_scale, rng));
  r.params.add("mem_feat", normal_matrix(dims.slots, dims.memory, mem_scale, rng));
  r.params.add("scale", normal_matrix(dims.experts, dims.memory, 1.0, rng));
  r.params.add("proj_W", Matrix());
  r.params.add("proj_b", Matrix());
  r.params.add("noise_W", Matrix());
  reinit_projection(r, dims.features, seed);
  return r;
}

void reinit_projection(RouterModel& r, int width, std::uint64_t seed) {
  if (width < 0) throw ParameterError("negative router width");
  Rng rng = make_rng(seed, "router-projection-" + std::to_string(width));
  r.dims.features = width;
  // glorot needs a non-degenerate fan; an empty feature set keeps 0 rows.
  r.params.replace("proj_W", width > 0 ? glorot(width, r.dims.memory, rng)
                                       : Matrix(0, r.dims.memory));
  r.params.replace("proj_b", Matrix::Zero(1, r.dims.memory));
  r.params.replace("noise_W", width > 0 ? glorot(width, r.dims.experts, rng)
                                        : Matrix(0, r.dims.experts));
}

RouteVars route(const RouterModel& r, std::span<const ad::Var> bound, const GraphContext& ctx,
                const Matrix& hr, const Matrix* noise) {
  check_width(r, ctx, hr);
  ad::Tape& tape = *bound.front().tape();
  const ad::Var hr_var = tape.constant(hr);
  const ad::Var feat_q =
      ad::add_row(ad::matmul(hr_var, param(r, bound, "proj_W")), param(r, bound, "proj_b"));
  const ad::Var& scale = param(r, bound, "scale");

  RouteVars out;
  ad::Var logits;
  if (r.use_memory) {
    const ad::Var node_q = ad::matmul(tape.constant(ctx.lowpass), param(r, bound, "gnn_W"));
    const ad::Var& mem_node = param(r, bound, "mem_node");
    const ad::Var& mem_feat = param(r, bound, "mem_feat");
    out.retrieval_node = ad::softmax_rows(ad::matmul_nt(node_q, mem_node));
    out.retrieval_feat = ad::softmax_rows(ad::matmul_nt(feat_q, mem_feat));
    const ad::Var node_m = ad::matmul(out.retrieval_node, mem_node);
    const ad::Var feat_m = ad::matmul(out.retrieval_feat, mem_feat);
    // g_i^e = <feat_m[i], node_m[i] * s^e> = ((feat_m * node_m) s^T)[i, e]
    logits = ad::matmul_nt(ad::mul(feat_m, node_m), scale);
  } else {
    logits = ad::matmul_nt(feat_q, scale);
  }
  if (noise) {
    if (noise->rows() != hr.rows() || noise->cols() != r.dims.experts) {
      throw ShapeError("routing noise has the wrong shape");
    }
    const ad::Var spread = ad::softplus(ad::matmul(hr_var, param(r, bound, "noise_W")));
    logits = ad::add(logits, ad::mul_const(spread, *noise));
  }
  out.logits = logits;
  out.weights = ad::softmax_rows(logits);
  return out;
}

RoutingOutput route(const RouterModel& r, const GraphContext& ctx, const Matrix& hr, Rng* rng) {
  Matrix noise;
  if (r.train_mode) {
    if (!rng) throw ContractError("train-mode routing needs a random source");
    noise = Matrix(hr.rows(), r.dims.experts);
    for (Index i = 0; i < noise.size(); ++i) noise.data()[i] = standard_normal(*rng);
  }
  ad::Tape tape;
  const auto bound = r.params.bind(tape, false);
  const RouteVars v = route(r, bound, ctx, hr, r.train_mode ? &noise : nullptr);
  RoutingOutput out;
  out.logits = v.logits.value();
  out.weights = v.weights.value();
  if (r.use_memory) {
    out.retrieval_node = v.retrieval_node.value();
    out.retrieval_feat = v.retrieval_feat.value();
  }
  return out;
}

std::pair<Matrix, Matrix> aggregate(const Matrix& weights, std::span<const Matrix> expert_h,
                                    std::span<const Matrix> expert_hrec) {
  if (expert_h.size() != static_cast<std::size_t>(weights.cols()) ||
      expert_hrec.size() != expert_h.size() || expert_h.empty()) {
    throw ShapeError("aggregate: expert count mismatch");
  }
  Matrix h = Matrix::Zero(expert_h[0].rows(), expert_h[0].cols());
  Matrix hrec = h;
  for (std::size_t e = 0; e < expert_h.size(); ++e) {
    if (expert_h[e].rows() != weights.rows() || expert_h[e].rows() != h.rows() ||
        expert_h[e].cols() != h.cols() || expert_hrec[e].rows() != h.rows() ||
        expert_hrec[e].cols() != h.cols()) {
      throw ShapeError("aggregate: expert matrix shape mismatch");
    }
    const auto w = weights.col(static_cast<Index>(e));
    h += w.asDiagonal() * expert_h[e];
    hrec += w.asDiagonal() * expert_hrec[e];
  }
  return {h, hrec};
}

ad::Var aggregate(const ad::Var& weights, std::span<const Matrix> expert_mats) {
  if (expert_mats.size() != static_cast<std::size_t>(weights.cols()) || expert_mats.empty()) {
    throw ShapeError("aggregate: expert count mismatch");
  }
  ad::Tape& tape = *weights.tape();
  ad::Var out;
  for (std::size_t e = 0; e < expert_mats.size(); ++e) {
    const ad::Var term =
        ad::mul_col(tape.constant(expert_mats[e]), ad::column(weights, static_cast<Index>(e)));
    out = e == 0 ? term : ad::add(out, term);
  }
  return out;
}

Matrix normalize_targets(const Matrix& q) {
  Matrix out(q.rows(), q.cols());
  for (Index i = 0; i < q.rows(); ++i) {
    const double s = q.row(i).sum();
    if (s == 0.0) {
      out.row(i).setConstant(1.0 / static_cast<double>(q.cols()));
    } else {
      out.row(i) = q.row(i) / std::max(s, 1.0);
    }
  }
  return out;
}

ad::Var kl_router_loss(const Matrix& q, const ad::Var& logits) {
  if (q.rows() != logits.rows() || q.cols() != logits.cols()) {
    throw ShapeError("kl_router_loss: shape mismatch");
  }
  const Matrix target = normalize_targets(q);
  const double n = static_cast<double>(q.rows());
  double entropy_term = 0.0;  // sum q log q, with 0 log 0 = 0
  for (Index i = 0; i < target.size(); ++i) {
    const double t = target.data()[i];
    if (t > 0.0) entropy_term += t * std::log(t);
  }
  const ad::Var cross = ad::dot_const(ad::log_softmax_rows(logits), target);
  return ad::add_scalar(ad::scale(cross, -1.0 / n), entropy_term / n);
}

double kl_router_loss(const Matrix& q, const Matrix& logits) {
  ad::Tape tape;
  return kl_router_loss(q, tape.constant(logits)).scalar();
}

ad::Var balance_loss(const ad::Var& weights, const ad::Var& logits) {
  return ad::add(ad::cv_squared(ad::col_sums(weights)),
                 ad::cv_squared(ad::shift_min(ad::col_sums(logits))));
}

double balance_loss(const Matrix& weights, const Matrix& logits) {
  ad::Tape tape;
  return balance_loss(tape.constant(weights), tape.constant(logits)).scalar();
}

RowVector routing_frequency(const Matrix& weights) {
  if (weights.rows() == 0) return RowVector::Zero(weights.cols());
  return weights.colwise().mean();
}

Matrix mask_columns(const Matrix& hr, const std::vector<bool>& keep) {
  if (keep.size() != static_cast<std::size_t>(hr.cols())) {
    throw ShapeError("column mask width mismatch");
  }
  Matrix out = hr;
  for (Index c = 0; c < hr.cols(); ++c) {
    if (!keep[static_cast<std::size_t>(c)]) out.col(c).setZero();
  }
  return out;
}

double routing_utility(const RouterModel& r, std::span<const RouterSample> samples,
                       const std::vector<bool>& subset) {
  if (samples.empty()) throw ParameterError("routing_utility needs at least one sample");
  RouterModel frozen = r;
  frozen.train_mode = false;
  double total = 0.0;
  for (const RouterSample& s : samples) {
    const RoutingOutput out = route(frozen, *s.ctx, mask_columns(s.features, subset));
    total += kl_router_loss(s.targets, out.logits(s.queries, Eigen::all));
  }
  return -total / static_cast<double>(samples.size());
}

EnvironmentDraw draw_environments(int k, int width, int num_nodes, int experts,
                                  double mask_rate, bool with_noise, Rng& rng) {
  if (k < 1) throw ParameterError("need at least one environment");
  if (!(mask_rate >= 0.0 && mask_rate < 1.0)) throw ParameterError("mask rate must be in [0,1)");
  EnvironmentDraw d;
  for (int e = 0; e < k; ++e) {
    std::vector<bool> m(static_cast<std::size_t>(width));
    for (int c = 0; c < width; ++c) m[static_cast<std::size_t>(c)] = uniform01(rng) >= mask_rate;
    d.masks.push_back(std::move(m));
  }
  if (with_noise) {
    auto draw = [&] {
      Matrix n(num_nodes, experts);
      for (Index i = 0; i < n.size(); ++i) n.data()[i] = standard_normal(rng);
      return n;
    };
    for (int e = 0; e < k; ++e) d.noise.push_back(draw());
    d.balance_noise = draw();
  }
  return d;
}

ad::Var invariant_loss(const RouterModel& r, std::span<const ad::Var> bound,
                       const RouterSample& s, const EnvironmentDraw& draw, double lambda,
                       std::vector<double>* env_losses) {
  std::vector<ad::Var> losses;
  losses.reserve(draw.masks.size());
  for (std::size_t k = 0; k < draw.masks.size(); ++k) {
    const Matrix* noise = draw.noise.empty() ? nullptr : &draw.noise[k];
    const RouteVars rv = route(r, bound, *s.ctx, mask_columns(s.features, draw.masks[k]), noise);
    const ad::Var p = ad::gather_rows(rv.weights, s.queries);
    losses.push_back(anomaly_loss(aggregate(p, s.hq), aggregate(p, s.hrec), s.y));
    if (env_losses) env_losses->push_back(losses.back().scalar());
  }
  return ad::mean_plus_var(ad::concat_scalars(losses), lambda);
}

InvariantLoss invariant_loss(const RouterModel& r, const RouterSample& s,
                             const EnvironmentDraw& draw, double lambda) {
  ad::Tape tape;
  const auto bound = r.params.bind(tape, false);
  InvariantLoss out;
  out.value = invariant_loss(r, bound, s, draw, lambda, &out.env_losses).scalar();
  return out;
}

double kl_objective(const RouterModel& r, const RouterSample& s, const Matrix* noise,
                    std::vector<double>* grad) {
  return with_gradient(r, grad, [&](std::span<const ad::Var> bound) {
    const RouteVars rv = route(r, bound, *s.ctx, s.features, noise);
    return kl_router_loss(s.targets, ad::gather_rows(rv.logits, s.queries));
  });
}

double balance_objective(const RouterModel& r, const RouterSample& s, const Matrix* noise,
                         std::vector<double>* grad) {
  return with_gradient(r, grad, [&](std::span<const ad::Var> bound) {
    const RouteVars rv = route(r, bound, *s.ctx, s.features, noise);
    return balance_loss(rv.weights, rv.logits);
  });
}

namespace {

ad::Var full_objective(const RouterModel& r, std::span<const ad::Var> bound,
                       const RouterSample& s, const EnvironmentDraw& draw, double lambda) {
  const ad::Var inv = invariant_loss(r, bound, s, draw, lambda);
  const Matrix* noise = draw.balance_noise.size() ? &draw.balance_noise : nullptr;
  const RouteVars rv = route(r, bound, *s.ctx, s.features, noise);
  return ad::add(inv, balance_loss(rv.weights, rv.logits));
}

std::vector<Matrix> grads_of(const ad::Tape& tape, const std::vector<ad::Var>& bound) {
  std::vector<Matrix> g;
  g.reserve(bound.size());
  for (const auto& b : bound) g.push_back(tape.grad(b));
  return g;
}

void check_samples(const RouterModel& r, std::span<const RouterSample> samples) {
  if (samples.empty()) throw ParameterError("router training needs at least one sample");
  for (const auto& s : samples) {
    if (s.targets.cols() != r.dims.experts || s.targets.rows() != static_cast<Index>(s.queries.size())) {
      throw ShapeError("router sample targets have the wrong shape");
    }
  }
}

}  // namespace

double router_objective(const RouterModel& r, const RouterSample& s, const EnvironmentDraw& draw,
                        double lambda, std::vector<double>* grad) {
  return with_gradient(r, grad, [&](std::span<const ad::Var> bound) {
    return full_objective(r, bound, s, draw, lambda);
  });
}

std::vector<double> warmup_router(RouterModel& r, std::span<const RouterSample> samples,
                                  const RouterTrainConfig& cfg, std::uint64_t seed) {
  check_samples(r, samples);
  Rng rng = make_rng(seed, "router-warmup");
  AdamW opt(cfg.lr, cfg.weight_decay);
  std::vector<double> trace;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    ad::Tape tape;
    const auto bound = r.params.bind(tape, true);
    ad::Var total;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const RouterSample& s = samples[i];
      Matrix noise;
      if (cfg.noise) {
        noise = Matrix(s.ctx->num_nodes(), r.dims.experts);
        for (Index j = 0; j < noise.size(); ++j) noise.data()[j] = standard_normal(rng);
      }
      const RouteVars rv = route(r, bound, *s.ctx, s.features, cfg.noise ? &noise : nullptr);
      const ad::Var loss = kl_router_loss(s.targets, ad::gather_rows(rv.logits, s.queries));
      total = i == 0 ? loss : ad::add(total, loss);
    }
    total = ad::scale(total, 1.0 / static_cast<double>(samples.size()));
    if (!std::isfinite(total.scalar())) {
      throw NumericError("router warm-up loss is not finite at epoch " + std::to_string(epoch));
    }
    trace.push_back(total.scalar());
    tape.backward(total);
    opt.step(r.params, grads_of(tape, bound));
    spdlog::debug("warm-up epoch {} KL {:.6f}", epoch, trace.back());
  }
  return trace;
}

std::vector<double> train_router(RouterModel& r, std::span<const RouterSample> samples,
                                 const RouterTrainConfig& cfg, std::uint64_t seed) {
  check_samples(r, samples);
  Rng rng = make_rng(seed, "router-train");
  AdamW opt(cfg.lr, cfg.weight_decay);
  std::vector<double> trace;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    ad::Tape tape;
    const auto bound = r.params.bind(tape, true);
    ad::Var total;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const RouterSample& s = samples[i];
      const EnvironmentDraw draw =
          draw_environments(cfg.environments, r.dims.features, s.ctx->num_nodes(),
                            r.dims.experts, cfg.mask_rate, cfg.noise, rng);
      const ad::Var loss = full_objective(r, bound, s, draw, cfg.lambda);
      total = i == 0 ? loss : ad::add(total, loss);
    }
    total = ad::scale(total, 1.0 / static_cast<double>(samples.size()));
    if (!std::isfinite(total.scalar())) {
      throw NumericError("router loss is not finite at epoch " + std::to_string(epoch));
    }
    trace.push_back(total.scalar());
    tape.backward(total);
    opt.step(r.params, grads_of(tape, bound));
    spdlog::debug("router epoch {} loss {:.6f}", epoch, trace.back());
  }
  return trace;
}

}  // namespace evofg
