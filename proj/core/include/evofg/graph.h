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

#ifndef EVOFG_GRAPH_H_
#define EVOFG_GRAPH_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evofg/matrix.h"

namespace evofg {

// Radius of the ego neighbourhood used by every ego-scoped router feature.
inline constexpr int kEgoRadius = 6;

// Ordered list of distinct node indices, strictly increasing.
using NodeSet = std::vector<int>;

struct Edge {
  int u;
  int v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable undirected attributed graph with binary anomaly labels.
//
// Edges are stored once with u < v; adjacency is row-compressed and sorted.
// A graph loaded without labels carries an all-zero label vector and
// has_labels() == false.
class Graph {
 public:
  struct BuildStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_merged = 0;
  };

  Graph() = default;

  // Symmetrizes and deduplicates `edges`, drops self-loops. Throws
  // RangeError for out-of-range endpoints, ShapeError for feature/label
  // size mismatches, NumericError for non-finite features and
  // ParameterError for labels outside {0,1}.
  Graph(std::string name, int num_nodes, std::span<const Edge> edges,
        Matrix features, std::vector<int> labels, bool has_labels = true);

  const std::string& name() const { return name_; }
  int num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int v) const {
    return {adjacency_.data() + offsets_[v],
            adjacency_.data() + offsets_[v + 1]};
  }
  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(int u, int v) const;

  const Matrix& features() const { return features_; }
  int feature_dim() const { return static_cast<int>(features_.cols()); }
  const std::vector<int>& labels() const { return labels_; }
  bool has_labels() const { return has_labels_; }
  int num_anomalies() const;
  const BuildStats& build_stats() const { return stats_; }

  // Throws ContractError unless 1 <= #anomalies < N/2.
  void require_trainable() const;

  Graph with_name(std::string name) const;
  Graph without_labels() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::string name_;
  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<int> adjacency_;
  Matrix features_;
  std::vector<int> labels_;
  bool has_labels_ = false;
  BuildStats stats_;
};

// Hop distances from `source`; -1 for unreachable or beyond `max_depth`
// (max_depth < 0 means unbounded).
std::vector<int> bfs_distances(const Graph& g, int source, int max_depth = -1);

// Nodes at shortest-path distance exactly k from v.
NodeSet k_hop_set(const Graph& g, int v, int k);

struct EgoGraph {
  Graph graph;
  NodeSet nodes;  // old index of each new node; new index = position
  int center = 0;  // new index of v
};

// Induced subgraph on nodes within kEgoRadius hops of v (v included).
EgoGraph ego_graph(const Graph& g, int v);

// Relabels nodes: new index of old node i is perm[i].
Graph permute_nodes(const Graph& g, std::span<const int> perm);

}  // namespace evofg

#endif  // EVOFG_GRAPH_H_
