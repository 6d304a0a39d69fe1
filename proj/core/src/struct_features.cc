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

#include "evofg/struct_features.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "evofg/error.h"
#include "evofg/rng.h"

namespace evofg {

namespace {

bool tied(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

double rank_fraction(const Vector& values, int v, std::span<const int> scope) {
  if (scope.size() <= 1) return 0.5;
  const double x = values[v];
  double below = 0.0;
  for (int u : scope) {
    if (u == v) continue;
    if (tied(values[u], x)) {
      below += 0.5;
    } else if (values[u] < x) {
      below += 1.0;
    }
  }
  return below / static_cast<double>(scope.size() - 1);
}

double cosine(const Matrix& x, int a, int b) {
  const double na = x.row(a).norm();
  const double nb = x.row(b).norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return x.row(a).dot(x.row(b)) / (na * nb);
}

// BFS from `source` up to `max_depth`, returning visited nodes in BFS order
// with their distances written to `dist` (which must be all -1 on entry and
// is restored to -1 for the visited nodes by the caller).
void bounded_bfs(const Graph& g, int source, int max_depth, std::vector<int>& dist,
                 std::vector<int>& order) {
  order.clear();
  dist[source] = 0;
  order.push_back(source);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int u = order[head];
    if (dist[u] == max_depth) continue;
    for (int w : g.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        order.push_back(w);
      }
    }
  }
}

void check_rows(const Graph& g, const Matrix& xtilde) {
  if (xtilde.rows() != g.num_nodes()) {
    throw ShapeError("feature rows " + std::to_string(xtilde.rows()) + " != nodes " +
                     std::to_string(g.num_nodes()));
  }
}

}  // namespace

Vector pagerank(const Graph& g) {
  const int n = g.num_nodes();
  if (n < 1) throw ParameterError("pagerank needs at least one node");
  const double inv_n = 1.0 / n;
  Vector x = Vector::Constant(n, inv_n);
  Vector next(n);
  for (int it = 0; it < kPageRankMaxIterations; ++it) {
    double dangling = 0.0;
    next.setZero();
    for (int u = 0; u < n; ++u) {
      const int deg = g.degree(u);
      if (deg == 0) {
        dangling += x[u];
        continue;
      }
      const double share = x[u] / deg;
      for (int w : g.neighbors(u)) next[w] += share;
    }
    const double base = (1.0 - kPageRankDamping) * inv_n + kPageRankDamping * dangling * inv_n;
    next = (kPageRankDamping * next).array() + base;
    next /= next.sum();
    const double change = (next - x).lpNorm<1>();
    x.swap(next);
    if (change < kPageRankTolerance) break;
  }
  return x;
}

Vector betweenness(const Graph& g, const BetweennessOptions& opt) {
  const int n = g.num_nodes();
  Vector bc = Vector::Zero(n);
  if (n < 3) return bc;

  std::vector<int> sources(n);
  std::iota(sources.begin(), sources.end(), 0);
  double rescale = 1.0;
  if (opt.sample_sources > 0 && opt.sample_sources < n) {
    if (opt.sample_sources < 64) {
      throw ParameterError("sampled betweenness needs at least 64 sources");
    }
    Rng rng = make_rng(opt.seed, "betweenness");
    std::shuffle(sources.begin(), sources.end(), rng);
    sources.resize(opt.sample_sources);
    rescale = static_cast<double>(n) / opt.sample_sources;
  }

  std::vector<int> dist(n, -1), order;
  std::vector<double> sigma(n, 0.0), delta(n, 0.0);
  order.reserve(n);
  for (int s : sources) {
    bounded_bfs(g, s, -1, dist, order);
    for (int v : order) sigma[v] = 0.0;
    sigma[s] = 1.0;
    for (int v : order) {
      for (int w : g.neighbors(v)) {
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (int v : order) delta[v] = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (int v : g.neighbors(w)) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) bc[w] += delta[w];
    }
    for (int v : order) dist[v] = -1;
  }
  // Each unordered pair is counted from both endpoints.
  const double pairs = (n - 1.0) * (n - 2.0) / 2.0;
  return bc * (rescale / 2.0 / pairs);
}

Vector closeness(const Graph& g) {
  const int n = g.num_nodes();
  Vector cc = Vector::Zero(n);
  if (n < 2) return cc;
  std::vector<int> dist(n, -1), order;
  for (int v = 0; v < n; ++v) {
    bounded_bfs(g, v, -1, dist, order);
    double total = 0.0;
    for (int u : order) total += dist[u];
    const double reach = static_cast<double>(order.size() - 1);
    if (reach > 0) cc[v] = (reach / (n - 1)) * (reach / total);
    for (int u : order) dist[u] = -1;
  }
  return cc;
}

ScopeColumns scope_expand(const Vector& values, const Graph& g) {
  const int n = g.num_nodes();
  if (values.size() != n) throw ShapeError("scope_expand: value length != node count");
  if (!values.allFinite()) throw NumericError("scope_expand: values are not finite");
  ScopeColumns out;
  out.target = values;
  out.ego_mean.resize(n);
  out.ego_rank.resize(n);
  out.global_rank.resize(n);
  out.global_mean = Vector::Constant(n, n > 0 ? values.mean() : 0.0);

  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> dist(n, -1), order;
  for (int v = 0; v < n; ++v) {
    bounded_bfs(g, v, kEgoRadius, dist, order);
    double sum = 0.0;
    for (int u : order) sum += values[u];
    out.ego_mean[v] = sum / static_cast<double>(order.size());
    out.ego_rank[v] = rank_fraction(values, v, order);
    out.global_rank[v] = rank_fraction(values, v, all);
    for (int u : order) dist[u] = -1;
  }
  return out;
}

Vector khop_similarity(const Graph& g, const Matrix& xtilde, int k) {
  check_rows(g, xtilde);
  if (k < 1) throw ParameterError("khop_similarity: k must be >= 1");
  const int n = g.num_nodes();
  Vector out = Vector::Zero(n);
  std::vector<int> dist(n, -1), order;
  for (int v = 0; v < n; ++v) {
    bounded_bfs(g, v, k, dist, order);
    double sum = 0.0;
    int count = 0;
    for (int u : order) {
      if (dist[u] == k) {
        sum += cosine(xtilde, v, u);
        ++count;
      }
    }
    if (count > 0) out[v] = sum / count;
    for (int u : order) dist[u] = -1;
  }
  return out;
}

EdgeSimilarity edge_avg_similarity(const Graph& g, const Matrix& xtilde) {
  check_rows(g, xtilde);
  if (g.num_edges() == 0) return {0.0, true};
  double sum = 0.0;
  for (const Edge& e : g.edges()) sum += cosine(xtilde, e.u, e.v);
  return {sum / static_cast<double>(g.num_edges()), false};
}

RouterFeatureTable compute_primitives(const Graph& g, const Matrix& xtilde,
                                      const PrimitiveOptions& opt) {
  check_rows(g, xtilde);
  const int n = g.num_nodes();

  BetweennessOptions bopt;
  if (n > opt.exact_betweenness_limit) {
    bopt.sample_sources = opt.sample_sources;
    bopt.seed = opt.seed;
    spdlog::info("graph '{}' has {} nodes; betweenness is approximated from {} sources",
                 g.name(), n, opt.sample_sources);
  }
  const std::array<Vector, 3> centrality = {pagerank(g), betweenness(g, bopt), closeness(g)};

  // One radius-6 BFS per node covers the ego scopes and all k-hop shells.
  std::array<ScopeColumns, 3> scoped;
  for (int c = 0; c < 3; ++c) {
    scoped[c].target = centrality[c];
    scoped[c].global_mean = Vector::Constant(n, centrality[c].mean());
    scoped[c].ego_mean.resize(n);
    scoped[c].ego_rank.resize(n);
    scoped[c].global_rank.resize(n);
  }
  std::array<Vector, 5> shell_sim;
  for (auto& s : shell_sim) s = Vector::Zero(n);
  Vector deg(n), ego_size(n);

  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> dist(n, -1), order;
  std::array<double, 5> sums{};
  std::array<int, 5> counts{};
  for (int v = 0; v < n; ++v) {
    bounded_bfs(g, v, kEgoRadius, dist, order);
    for (int c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (int u : order) sum += centrality[c][u];
      scoped[c].ego_mean[v] = sum / static_cast<double>(order.size());
      scoped[c].ego_rank[v] = rank_fraction(centrality[c], v, order);
      scoped[c].global_rank[v] = rank_fraction(centrality[c], v, all);
    }
    sums.fill(0.0);
    counts.fill(0);
    for (int u : order) {
      const int d = dist[u];
      if (d >= 1 && d <= 5) {
        sums[d - 1] += cosine(xtilde, v, u);
        ++counts[d - 1];
      }
    }
    for (int k = 0; k < 5; ++k) {
      if (counts[k] > 0) shell_sim[k][v] = sums[k] / counts[k];
    }
    deg[v] = g.degree(v);
    ego_size[v] = static_cast<double>(order.size());
    for (int u : order) dist[u] = -1;
  }

  const EdgeSimilarity edge_sim = edge_avg_similarity(g, xtilde);
  if (edge_sim.edgeless) spdlog::warn("graph '{}' has no edges; Sim_edge_avg set to 0", g.name());

  RouterFeatureTable table(n);
  const auto& names = primitive_names();
  int col = 0;
  auto add = [&](const Vector& v) {
    table.add_column(std::string(names[col]), primitive_category(col), v);
    ++col;
  };
  for (const ScopeColumns& s : scoped) {
    add(s.target);
    add(s.ego_mean);
    add(s.global_mean);
    add(s.ego_rank);
    add(s.global_rank);
  }
  add(Vector::Constant(n, edge_sim.value));
  for (const Vector& s : shell_sim) add(s);
  add(deg);
  add(ego_size);
  return table;
}

}  // namespace evofg
