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

#include "evofg/graph_io.h"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string_view>
#include <vector>

#include <spdlog/spdlog.h>

#include "evofg/error.h"
#include "evofg/io.h"

namespace evofg {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string where(const std::filesystem::path& p, std::size_t line) {
  return p.string() + ":" + std::to_string(line);
}

// Splits on spaces/tabs.
std::vector<std::string_view> fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

long long parse_int(std::string_view tok, const std::filesystem::path& p,
                    std::size_t line) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(where(p, line) + ": expected integer, got '" +
                         std::string(tok) + "'",
                     line);
  }
  return value;
}

double parse_real(std::string_view tok, const std::filesystem::path& p,
                  std::size_t line) {
  // strtod accepts the full decimal/exponent grammar and round-trips %.17g.
  const std::string s(tok);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) {
    throw ParseError(where(p, line) + ": expected real, got '" + s + "'", line);
  }
  return value;
}

Matrix read_features(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  std::string line;
  std::size_t lineno = 0;
  long long n = -1, d = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto f = fields(t);
    if (f.size() != 2) {
      throw ParseError(where(path, lineno) + ": header must be 'N d_ori'",
                       lineno);
    }
    n = parse_int(f[0], path, lineno);
    d = parse_int(f[1], path, lineno);
    break;
  }
  if (n < 0 || d < 0) throw ParseError(where(path, lineno) + ": missing header", lineno);
  Matrix x(n, d);
  long long row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (row >= n) {
      throw ShapeError(where(path, lineno) + ": more than N=" +
                       std::to_string(n) + " feature rows");
    }
    const auto f = fields(t);
    if (static_cast<long long>(f.size()) != d) {
      throw ParseError(where(path, lineno) + ": expected " + std::to_string(d) +
                           " values, got " + std::to_string(f.size()),
                       lineno);
    }
    for (long long c = 0; c < d; ++c) x(row, c) = parse_real(f[c], path, lineno);
    ++row;
  }
  if (row != n) {
    throw ShapeError(path.string() + ": feature row count " +
                     std::to_string(row) + " != N=" + std::to_string(n));
  }
  return x;
}

std::vector<Edge> read_edges(const std::filesystem::path& path, int n) {
  auto in = io::open_input(path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (const auto hash = t.find('#'); hash != std::string_view::npos) {
      t = trim(t.substr(0, hash));
    }
    if (t.empty()) continue;
    const auto f = fields(t);
    if (f.size() != 2) {
      throw ParseError(where(path, lineno) + ": expected 'u<TAB>v'", lineno);
    }
    const long long u = parse_int(f[0], path, lineno);
    const long long v = parse_int(f[1], path, lineno);
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw RangeError(where(path, lineno) + ": node index out of range for N=" +
                       std::to_string(n) + " in '" + std::string(t) + "'");
    }
    edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  }
  return edges;
}

std::vector<int> read_labels(const std::filesystem::path& path, int n) {
  auto in = io::open_input(path);
  std::vector<int> labels;
  labels.reserve(n);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t != "0" && t != "1") {
      throw ParseError(where(path, lineno) + ": label must be 0 or 1", lineno);
    }
    labels.push_back(t == "1" ? 1 : 0);
  }
  if (static_cast<int>(labels.size()) != n) {
    throw ShapeError(path.string() + ": label count " +
                     std::to_string(labels.size()) + " != N=" +
                     std::to_string(n));
  }
  return labels;
}

Graph assemble(const std::string& name, Matrix x, std::vector<Edge> edges,
               std::vector<int> labels, bool has_labels) {
  const int n = static_cast<int>(x.rows());
  Graph g(name, n, edges, std::move(x), std::move(labels), has_labels);
  if (g.build_stats().self_loops_dropped > 0) {
    spdlog::warn("graph '{}': dropped {} self-loop(s)", name,
                 g.build_stats().self_loops_dropped);
  }
  return g;
}

}  // namespace

std::vector<int> load_labels(const std::filesystem::path& label_path, int num_nodes) {
  return read_labels(label_path, num_nodes);
}

GraphPaths GraphPaths::in_dir(const std::filesystem::path& dir) {
  return {dir / "edges.tsv", dir / "features.txt", dir / "labels.txt"};
}

Graph load_graph(const std::filesystem::path& edge_path,
                 const std::filesystem::path& feature_path,
                 const std::filesystem::path& label_path,
                 const std::string& name) {
  Matrix x = read_features(feature_path);
  const int n = static_cast<int>(x.rows());
  auto edges = read_edges(edge_path, n);
  auto labels = read_labels(label_path, n);
  return assemble(name, std::move(x), std::move(edges), std::move(labels), true);
}

Graph load_graph_unlabeled(const std::filesystem::path& edge_path,
                           const std::filesystem::path& feature_path,
                           const std::string& name) {
  Matrix x = read_features(feature_path);
  const int n = static_cast<int>(x.rows());
  auto edges = read_edges(edge_path, n);
  return assemble(name, std::move(x), std::move(edges), {}, false);
}

Graph load_graph_dir(const std::filesystem::path& dir, bool with_labels) {
  const auto paths = GraphPaths::in_dir(dir);
  auto name = std::filesystem::path(dir).lexically_normal().filename().string();
  if (name.empty()) {
    name = std::filesystem::path(dir).lexically_normal().parent_path().filename().string();
  }
  return with_labels ? load_graph(paths.edges, paths.features, paths.labels, name)
                     : load_graph_unlabeled(paths.edges, paths.features, name);
}

void save_graph(const Graph& g, const std::filesystem::path& dir) {
  const auto paths = GraphPaths::in_dir(dir);
  {
    auto out = io::open_output(paths.edges);
    out << "# " << g.name() << ": " << g.num_nodes() << " nodes, "
        << g.num_edges() << " undirected edges\n";
    for (const Edge& e : g.edges()) out << e.u << '\t' << e.v << '\n';
  }
  {
    auto out = io::open_output(paths.features);
    out << g.num_nodes() << ' ' << g.feature_dim() << '\n';
    char buf[32];
    for (Index i = 0; i < g.features().rows(); ++i) {
      for (Index j = 0; j < g.features().cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", g.features()(i, j));
        if (j > 0) out << ' ';
        out << buf;
      }
      out << '\n';
    }
  }
  if (g.has_labels()) {
    auto out = io::open_output(paths.labels);
    for (int y : g.labels()) out << y << '\n';
  }
}

}  // namespace evofg
