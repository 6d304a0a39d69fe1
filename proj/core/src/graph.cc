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

#include "evofg/graph.h"

#include <algorithm>
#include <deque>
#include <string>

#include "evofg/error.h"

namespace evofg {

Graph::Graph(std::string name, int num_nodes, std::span<const Edge> edges,
             Matrix features, std::vector<int> labels, bool has_labels)
    : name_(std::move(name)),
      num_nodes_(num_nodes),
      features_(std::move(features)),
      labels_(std::move(labels)),
      has_labels_(has_labels) {
  if (num_nodes < 0) throw ParameterError("negative node count");
  if (features_.rows() != num_nodes) {
    throw ShapeError("feature rows (" + std::to_string(features_.rows()) +
                     ") != node count (" + std::to_string(num_nodes) + ")");
  }
  if (!features_.allFinite()) throw NumericError("features contain NaN/Inf");
  if (!has_labels_ && labels_.empty()) labels_.assign(num_nodes, 0);
  if (static_cast<int>(labels_.size()) != num_nodes) {
    throw ShapeError("label count (" + std::to_string(labels_.size()) +
                     ") != node count (" + std::to_string(num_nodes) + ")");
  }
  for (int y : labels_) {
    if (y != 0 && y != 1) throw ParameterError("labels must be 0 or 1");
  }

  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= num_nodes || e.v < 0 || e.v >= num_nodes) {
      throw RangeError("edge (" + std::to_string(e.u) + "," +
                       std::to_string(e.v) + ") out of range for N=" +
                       std::to_string(num_nodes));
    }
    if (e.u == e.v) {
      ++stats_.self_loops_dropped;
      continue;
    }
    edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(edges_.begin(), edges_.end());
  const auto last = std::unique(edges_.begin(), edges_.end());
  stats_.duplicates_merged = static_cast<std::size_t>(edges_.end() - last);
  edges_.erase(last, edges_.end());

  std::vector<int> deg(num_nodes, 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(num_nodes + 1, 0);
  for (int i = 0; i < num_nodes; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  adjacency_.assign(offsets_.back(), 0);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (int i = 0; i < num_nodes; ++i) {
    std::sort(adjacency_.begin() + offsets_[i],
              adjacency_.begin() + offsets_[i + 1]);
  }
}

bool Graph::has_edge(int u, int v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

int Graph::num_anomalies() const {
  return static_cast<int>(std::count(labels_.begin(), labels_.end(), 1));
}

void Graph::require_trainable() const {
  if (!has_labels_) throw ContractError("graph '" + name_ + "' has no labels");
  const int a = num_anomalies();
  if (a < 1 || 2 * a >= num_nodes_) {
    throw ContractError("graph '" + name_ + "' needs 1 <= anomalies < N/2, has " +
                        std::to_string(a) + " of " +
                        std::to_string(num_nodes_));
  }
}

Graph Graph::with_name(std::string name) const {
  Graph g = *this;
  g.name_ = std::move(name);
  return g;
}

Graph Graph::without_labels() const {
  Graph g = *this;
  g.labels_.assign(num_nodes_, 0);
  g.has_labels_ = false;
  return g;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.name_ == b.name_ && a.num_nodes_ == b.num_nodes_ &&
         a.edges_ == b.edges_ && a.labels_ == b.labels_ &&
         a.has_labels_ == b.has_labels_ &&
         a.features_.rows() == b.features_.rows() &&
         a.features_.cols() == b.features_.cols() &&
         a.features_ == b.features_;
}

std::vector<int> bfs_distances(const Graph& g, int source, int max_depth) {
  if (source < 0 || source >= g.num_nodes()) {
    throw RangeError("node " + std::to_string(source) + " out of range");
  }
  std::vector<int> dist(g.num_nodes(), -1);
  std::deque<int> frontier{source};
  dist[source] = 0;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    if (max_depth >= 0 && dist[u] >= max_depth) continue;
    for (int w : g.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

NodeSet k_hop_set(const Graph& g, int v, int k) {
  if (k < 1) throw ParameterError("k_hop_set needs k >= 1");
  const auto dist = bfs_distances(g, v, k);
  NodeSet out;
  for (int u = 0; u < g.num_nodes(); ++u) {
    if (dist[u] == k) out.push_back(u);
  }
  return out;
}

EgoGraph ego_graph(const Graph& g, int v) {
  const auto dist = bfs_distances(g, v, kEgoRadius);
  EgoGraph ego;
  std::vector<int> remap(g.num_nodes(), -1);
  for (int u = 0; u < g.num_nodes(); ++u) {
    if (dist[u] >= 0) {
      remap[u] = static_cast<int>(ego.nodes.size());
      ego.nodes.push_back(u);
    }
  }
  ego.center = remap[v];
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (remap[e.u] >= 0 && remap[e.v] >= 0) {
      edges.push_back({remap[e.u], remap[e.v]});
    }
  }
  const int n = static_cast<int>(ego.nodes.size());
  Matrix x(n, g.feature_dim());
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    x.row(i) = g.features().row(ego.nodes[i]);
    y[i] = g.labels()[ego.nodes[i]];
  }
  ego.graph = Graph(g.name() + "/ego" + std::to_string(v), n, edges,
                    std::move(x), std::move(y), g.has_labels());
  return ego;
}

Graph permute_nodes(const Graph& g, std::span<const int> perm) {
  const int n = g.num_nodes();
  if (static_cast<int>(perm.size()) != n) {
    throw ShapeError("permutation size mismatch");
  }
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
  Matrix x(n, g.feature_dim());
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    x.row(perm[i]) = g.features().row(i);
    y[perm[i]] = g.labels()[i];
  }
  return Graph(g.name(), n, edges, std::move(x), std::move(y), g.has_labels());
}

}  // namespace evofg
