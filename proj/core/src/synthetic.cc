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

#include "evofg/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "evofg/error.h"
#include "evofg/rng.h"

namespace evofg {
namespace {

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_index(rng, i)]);
  }
}

}  // namespace

PlantedKind parse_planted_kind(const std::string& s) {
  if (s == "structural") return PlantedKind::kStructural;
  if (s == "attribute") return PlantedKind::kAttribute;
  if (s == "mixed") return PlantedKind::kMixed;
  throw ParameterError("unknown planted kind '" + s + "'");
}

std::string to_string(PlantedKind kind) {
  switch (kind) {
    case PlantedKind::kStructural: return "structural";
    case PlantedKind::kAttribute: return "attribute";
    case PlantedKind::kMixed: return "mixed";
  }
  return "?";
}

Graph gen_synthetic(int n, int d, double anomaly_rate, std::uint64_t seed,
                    PlantedKind kind, const SyntheticOptions& opt) {
  if (!(anomaly_rate > 0.0 && anomaly_rate < 0.5)) {
    throw ParameterError("anomaly_rate must lie in (0, 0.5)");
  }
  if (n < 20) throw ParameterError("n_nodes must be >= 20");
  if (d < 1) throw ParameterError("n_features must be >= 1");
  if (opt.communities < 1 || opt.communities > n) {
    throw ParameterError("invalid community count");
  }
  const int n_anomalies = static_cast<int>(std::floor(anomaly_rate * n));
  if (n_anomalies < 1) throw ParameterError("anomaly_rate too small for n_nodes");

  Rng rng = make_rng(seed, "gen_synthetic");
  const int C = opt.communities;

  std::vector<int> community(n);
  for (int i = 0; i < n; ++i) community[i] = i % C;
  shuffle(community, rng);

  std::vector<double> theta(n);
  for (double& t : theta) {
    const double u = uniform01(rng);
    t = std::min(std::pow(1.0 - u, -1.0 / (opt.degree_exponent - 1.0)),
                 opt.max_propensity);
  }
  const double mean_theta = std::accumulate(theta.begin(), theta.end(), 0.0) / n;
  for (double& t : theta) t /= mean_theta;

  const double n_in = static_cast<double>(n) / C;
  const double n_out = n - n_in;
  const double p_in = (1.0 - opt.cross_fraction) * opt.mean_degree / n_in;
  const double p_out = n_out > 0 ? opt.cross_fraction * opt.mean_degree / n_out : 0.0;

  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double base = community[i] == community[j] ? p_in : p_out;
      const double p = std::min(1.0, theta[i] * theta[j] * base);
      if (uniform01(rng) < p) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }

  Matrix centroids(C, d);
  for (Index c = 0; c < C; ++c) {
    for (Index k = 0; k < d; ++k) centroids(c, k) = opt.centroid_scale * standard_normal(rng);
  }
  Matrix x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) x(i, k) = centroids(community[i], k) + standard_normal(rng);
  }
  const RowVector col_mean = x.colwise().mean();
  const RowVector col_std =
      ((x.rowwise() - col_mean).array().square().colwise().sum() / n).sqrt().matrix();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::vector<int> anomalies(order.begin(), order.begin() + n_anomalies);
  std::sort(anomalies.begin(), anomalies.end());

  int n_structural = 0;
  switch (kind) {
    case PlantedKind::kStructural: n_structural = n_anomalies; break;
    case PlantedKind::kAttribute: n_structural = 0; break;
    case PlantedKind::kMixed:
      n_structural = static_cast<int>(std::lround(opt.structural_share * n_anomalies));
      break;
  }
  std::vector<int> planted = anomalies;
  shuffle(planted, rng);

  std::vector<int> labels(n, 0);
  for (int a : anomalies) labels[a] = 1;

  for (int idx = 0; idx < n_anomalies; ++idx) {
    const int v = planted[idx];
    if (idx < n_structural) {
      const int want = std::max<int>(static_cast<int>(adj[v].size()), 2);
      for (int u : adj[v]) {
        auto& back = adj[u];
        back.erase(std::remove(back.begin(), back.end(), v), back.end());
      }
      adj[v].clear();
      while (static_cast<int>(adj[v].size()) < want) {
        const int u = static_cast<int>(uniform_index(rng, n));
        if (u == v || std::find(adj[v].begin(), adj[v].end(), u) != adj[v].end()) continue;
        adj[v].push_back(u);
        adj[u].push_back(v);
      }
    } else {
      std::vector<int> coords(d);
      std::iota(coords.begin(), coords.end(), 0);
      shuffle(coords, rng);
      const int half = std::max(1, d / 2);
      for (int c = 0; c < half; ++c) {
        x(v, coords[c]) += opt.attribute_shift * col_std(coords[c]);
      }
    }
  }

  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      if (i < j) edges.push_back({i, j});
    }
  }
  return Graph(opt.name, n, edges, std::move(x), std::move(labels), true);
}

}  // namespace evofg
