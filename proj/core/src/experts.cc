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

#include "evofg/experts.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "evofg/error.h"

namespace evofg {

namespace {

constexpr std::array<std::string_view, 4> kArchNames = {"LOWPASS", "ATTENTION", "CHEBY", "GPR"};

const ad::Var& param(const ExpertModel& m, std::span<const ad::Var> bound, const char* name) {
  return bound[m.params.index_of(name)];
}

ad::Tape& tape_of(std::span<const ad::Var> bound) { return *bound.front().tape(); }

void check_dims(const ExpertModel& m, const GraphContext& ctx) {
  if (ctx.feature_dim() != m.dims.input) {
    throw ShapeError("expert expects " + std::to_string(m.dims.input) +
                     "-dimensional features, got " + std::to_string(ctx.feature_dim()));
  }
}

}  // namespace

std::string_view to_string(Arch a) { return kArchNames[static_cast<int>(a)]; }

std::optional<Arch> parse_arch(std::string_view s) {
  for (int i = 0; i < 4; ++i) {
    if (kArchNames[i] == s) return static_cast<Arch>(i);
  }
  return std::nullopt;
}

ExpertModel init_expert(Arch arch, ExpertDims dims, std::uint64_t seed) {
  if (dims.input < 1 || dims.hidden < 1 || dims.attention < 1) {
    throw ParameterError("expert dimensions must be positive");
  }
  ExpertModel m;
  m.arch = arch;
  m.dims = dims;
  m.seed = seed;
  Rng rng = make_rng(seed, std::string("expert-") + std::string(to_string(arch)));
  m.params.add("W0", glorot(dims.input, dims.hidden, rng));
  switch (arch) {
    case Arch::kLowpass:
      break;
    case Arch::kAttention:
      m.params.add("a_self", glorot(dims.hidden, 1, rng));
      m.params.add("a_nbr", glorot(dims.hidden, 1, rng));
      break;
    case Arch::kCheby:
      for (int k = 1; k < kChebyshevOrder; ++k) {
        m.params.add("W" + std::to_string(k), glorot(dims.input, dims.hidden, rng));
      }
      break;
    case Arch::kGpr: {
      Matrix gamma(1, kGprDepth + 1);
      for (int t = 0; t <= kGprDepth; ++t) gamma(0, t) = kGprAlpha * std::pow(1.0 - kGprAlpha, t);
      m.params.add("gamma", gamma);
      break;
    }
  }
  m.params.add("Wq", glorot(dims.hidden, dims.attention, rng));
  m.params.add("Wk", glorot(dims.hidden, dims.attention, rng));
  return m;
}

ad::Var encode(const ExpertModel& m, std::span<const ad::Var> bound, const GraphContext& ctx) {
  check_dims(m, ctx);
  ad::Tape& tape = tape_of(bound);
  const ad::Var& w0 = param(m, bound, "W0");
  ad::Var h;
  switch (m.arch) {
    case Arch::kLowpass:
      h = ad::spmm(ctx.adj_self_norm, ad::matmul(tape.constant(ctx.features), w0));
      break;
    case Arch::kAttention: {
      const ad::Var z = ad::matmul(tape.constant(ctx.features), w0);
      const ad::Var self = ad::matmul(z, param(m, bound, "a_self"));
      const ad::Var nbr = ad::matmul(z, param(m, bound, "a_nbr"));
      h = ad::edge_softmax_aggregate(self, nbr, z, ctx.neighborhoods, kAttentionSlope);
      break;
    }
    case Arch::kCheby:
      h = ad::matmul(tape.constant(ctx.cheb_basis[0]), w0);
      for (int k = 1; k < kChebyshevOrder; ++k) {
        const ad::Var& wk = param(m, bound, ("W" + std::to_string(k)).c_str());
        h = ad::add(h, ad::matmul(tape.constant(ctx.cheb_basis[k]), wk));
      }
      break;
    case Arch::kGpr: {
      const ad::Var& gamma = param(m, bound, "gamma");
      for (int t = 0; t <= kGprDepth; ++t) {
        const ad::Var term = ad::mul_scalar(ad::element(gamma, 0, t),
                                            ad::matmul(tape.constant(ctx.gpr_basis[t]), w0));
        h = t == 0 ? term : ad::add(h, term);
      }
      return h;
    }
  }
  return ad::tanh(ad::spmm(ctx.residual, h));
}

ad::Var reconstruct(const ExpertModel& m, std::span<const ad::Var> bound, const ad::Var& hq,
                    const ad::Var& hk) {
  if (hk.rows() == 0) throw ContractError("cross-attention needs at least one key");
  const ad::Var q = ad::matmul(hq, param(m, bound, "Wq"));
  const ad::Var k = ad::matmul(hk, param(m, bound, "Wk"));
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(m.dims.attention));
  const ad::Var attn = ad::softmax_rows(ad::scale(ad::matmul_nt(q, k), inv_sqrt));
  return ad::matmul(attn, hk);
}

ad::Var anomaly_loss(const ad::Var& hq, const ad::Var& hrec, std::span<const int> y) {
  if (hq.rows() != static_cast<Index>(y.size()) || hrec.rows() != hq.rows() ||
      hrec.cols() != hq.cols()) {
    throw ShapeError("anomaly_loss: shape mismatch");
  }
  Matrix normal(hq.rows(), 1), anomalous(hq.rows(), 1);
  for (std::size_t i = 0; i < y.size(); ++i) {
    normal(static_cast<Index>(i), 0) = y[i] ? 0.0 : 1.0;
    anomalous(static_cast<Index>(i), 0) = y[i] ? 1.0 : 0.0;
  }
  const ad::Var cos = ad::row_cosine(hrec, hq);
  const ad::Var normal_term = ad::mul_const(ad::add_scalar(ad::scale(cos, -1.0), 1.0), normal);
  const ad::Var anomaly_term = ad::mul_const(ad::relu(cos), anomalous);
  return ad::mean(ad::add(normal_term, anomaly_term));
}

Matrix encode(const ExpertModel& m, const GraphContext& ctx) {
  ad::Tape tape;
  const auto bound = m.params.bind(tape, false);
  return encode(m, bound, ctx).value();
}

Matrix reconstruct(const ExpertModel& m, const Matrix& hq, const Matrix& hk) {
  if (hq.cols() != m.dims.hidden || hk.cols() != m.dims.hidden) {
    throw ShapeError("reconstruct: embedding width != d_e");
  }
  ad::Tape tape;
  const auto bound = m.params.bind(tape, false);
  return reconstruct(m, bound, tape.constant(hq), tape.constant(hk)).value();
}

Matrix cross_attn_reconstruct(const ExpertModel& m, const Matrix& h, const NodeSet& keys,
                              const NodeSet& queries) {
  if (keys.empty()) throw ContractError("cross-attention needs at least one key");
  std::vector<char> is_key(static_cast<std::size_t>(h.rows()), 0);
  for (int k : keys) is_key[k] = 1;
  for (int q : queries) {
    if (is_key[q]) throw ContractError("node " + std::to_string(q) + " is both key and query");
  }
  return reconstruct(m, h(queries, Eigen::all), h(keys, Eigen::all));
}

std::vector<double> anomaly_scores(const Matrix& hq, const Matrix& hrec) {
  if (hq.rows() != hrec.rows() || hq.cols() != hrec.cols()) {
    throw ShapeError("anomaly_scores: shape mismatch");
  }
  std::vector<double> s(static_cast<std::size_t>(hq.rows()));
  for (Index i = 0; i < hq.rows(); ++i) s[static_cast<std::size_t>(i)] = (hq.row(i) - hrec.row(i)).norm();
  return s;
}

double anomaly_loss(const Matrix& hq, const Matrix& hrec, std::span<const int> y) {
  ad::Tape tape;
  return anomaly_loss(tape.constant(hq), tape.constant(hrec), y).scalar();
}

NodeSet sample_keys(const Graph& g, double fraction, Rng& rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ParameterError("key fraction must be in (0,1)");
  NodeSet normals;
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (!g.labels()[v]) normals.push_back(v);
  }
  if (normals.empty()) throw ContractError("graph '" + g.name() + "' has no normal nodes");
  const auto want = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(normals.size()))));
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < want; ++i) {
    const auto j = i + uniform_index(rng, normals.size() - i);
    std::swap(normals[i], normals[j]);
  }
  normals.resize(want);
  std::sort(normals.begin(), normals.end());
  return normals;
}

NodeSet complement(int num_nodes, const NodeSet& set) {
  NodeSet out;
  std::size_t j = 0;
  for (int v = 0; v < num_nodes; ++v) {
    if (j < set.size() && set[j] == v) {
      ++j;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<int> gather(std::span<const int> values, const NodeSet& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(values[r]);
  return out;
}

double expert_loss(const ExpertModel& m, const GraphContext& ctx, const NodeSet& keys,
                   const NodeSet& queries, std::vector<double>* grad) {
  ad::Tape tape;
  const auto bound = m.params.bind(tape, grad != nullptr);
  const ad::Var h = encode(m, bound, ctx);
  const ad::Var hq = ad::gather_rows(h, queries);
  const ad::Var hk = ad::gather_rows(h, keys);
  const auto y = gather(ctx.graph.labels(), queries);
  const ad::Var loss = anomaly_loss(hq, reconstruct(m, bound, hq, hk), y);
  if (grad) {
    tape.backward(loss);
    *grad = gather_gradient(tape, bound);
  }
  return loss.scalar();
}

int default_expert_epochs(Arch arch) { return arch == Arch::kGpr ? 40 : 10; }

ExpertModel pretrain_expert(Arch arch, std::span<const GraphContext* const> graphs,
                            ExpertDims dims, const ExpertTrainConfig& cfg, std::uint64_t seed) {
  if (graphs.empty()) throw ParameterError("pretrain_expert needs at least one graph");
  if (cfg.epochs < 0) throw ParameterError("epochs must be non-negative");
  ExpertModel m = init_expert(arch, dims, seed);
  Rng rng = make_rng(seed, std::string("expert-keys-") + std::string(to_string(arch)));
  AdamW opt(cfg.lr, cfg.weight_decay);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    ad::Tape tape;
    const auto bound = m.params.bind(tape, true);
    ad::Var total;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      const GraphContext& ctx = *graphs[gi];
      const NodeSet keys = sample_keys(ctx.graph, cfg.key_fraction, rng);
      const NodeSet queries = complement(ctx.num_nodes(), keys);
      const ad::Var h = encode(m, bound, ctx);
      const ad::Var hq = ad::gather_rows(h, queries);
      const ad::Var hk = ad::gather_rows(h, keys);
      const ad::Var loss =
          anomaly_loss(hq, reconstruct(m, bound, hq, hk), gather(ctx.graph.labels(), queries));
      total = gi == 0 ? loss : ad::add(total, loss);
    }
    total = ad::scale(total, 1.0 / static_cast<double>(graphs.size()));
    const double value = total.scalar();
    if (!std::isfinite(value)) {
      throw NumericError(std::string(to_string(arch)) + " expert loss is not finite at epoch " +
                         std::to_string(epoch) + " (seed " + std::to_string(seed) + ")");
    }
    m.loss_trace.push_back(value);
    tape.backward(total);
    std::vector<Matrix> grads;
    grads.reserve(bound.size());
    for (const auto& b : bound) grads.push_back(tape.grad(b));
    opt.step(m.params, grads);
    spdlog::debug("{} epoch {} loss {:.6f}", to_string(arch), epoch, value);
  }
  if (!m.params.all_finite()) throw NumericError(std::string(to_string(arch)) + " parameters diverged");
  m.trained = cfg.epochs > 0;
  return m;
}

std::vector<int> expert_correctness(std::span<const double> scores, std::span<const int> y) {
  if (scores.size() != y.size()) throw ShapeError("expert_correctness: size mismatch");
  const int positives = static_cast<int>(std::count(y.begin(), y.end(), 1));
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  std::vector<int> predicted(scores.size(), 0);
  for (int i = 0; i < positives; ++i) predicted[order[i]] = 1;
  std::vector<int> q(scores.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = predicted[i] == y[i] ? 1 : 0;
  return q;
}

Matrix expert_correctness(const Matrix& scores, std::span<const int> y) {
  Matrix q(scores.rows(), scores.cols());
  for (Index e = 0; e < scores.cols(); ++e) {
    const Vector col = scores.col(e);
    const auto c = expert_correctness(std::span<const double>(col.data(), col.size()), y);
    for (Index i = 0; i < scores.rows(); ++i) q(i, e) = c[static_cast<std::size_t>(i)];
  }
  return q;
}

}  // namespace evofg
