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

#ifndef EVOFG_GRAPH_IO_H_
#define EVOFG_GRAPH_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "evofg/graph.h"

namespace evofg {

// Three-file layout of a graph directory.
struct GraphPaths {
  std::filesystem::path edges;
  std::filesystem::path features;
  std::filesystem::path labels;

  static GraphPaths in_dir(const std::filesystem::path& dir);
};

// Edge file: one "u<TAB>v" per line, 0-based, '#' comments and blank lines
// allowed. Feature file: header "N d_ori" then N rows of d_ori reals.
// Label file: N lines of 0 or 1.
//
// Throws ParseError (with line number), RangeError, ShapeError.
Graph load_graph(const std::filesystem::path& edge_path,
                 const std::filesystem::path& feature_path,
                 const std::filesystem::path& label_path,
                 const std::string& name);

// Same as load_graph but never touches a label file.
Graph load_graph_unlabeled(const std::filesystem::path& edge_path,
                           const std::filesystem::path& feature_path,
                           const std::string& name);

// Reads only a label file; used by evaluation, which is the one stage that
// may look at target labels.
std::vector<int> load_labels(const std::filesystem::path& label_path, int num_nodes);

// Graph name defaults to the directory's final component.
Graph load_graph_dir(const std::filesystem::path& dir, bool with_labels = true);

// Writes the three-file layout; labels are written only if present.
void save_graph(const Graph& g, const std::filesystem::path& dir);

}  // namespace evofg

#endif  // EVOFG_GRAPH_IO_H_
