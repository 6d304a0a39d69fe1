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

#include <benchmark/benchmark.h>

#include "evofg/graph_context.h"
#include "evofg/struct_features.h"
#include "evofg/synthetic.h"

namespace evofg {
namespace {

Graph bench_graph(int n) { return gen_synthetic(n, 16, 0.05, 3, PlantedKind::kMixed); }

void BM_Betweenness(benchmark::State& state) {
  const Graph g = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(betweenness(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Betweenness)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

void BM_Closeness(benchmark::State& state) {
  const Graph g = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(closeness(g));
}
BENCHMARK(BM_Closeness)->RangeMultiplier(2)->Range(128, 1024);

void BM_PageRank(benchmark::State& state) {
  const Graph g = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pagerank(g));
}
BENCHMARK(BM_PageRank)->RangeMultiplier(4)->Range(256, 4096);

void BM_Primitives(benchmark::State& state) {
  const Graph g = bench_graph(static_cast<int>(state.range(0)));
  const auto ctx = GraphContext::build(g, 16);
  for (auto _ : state) benchmark::DoNotOptimize(compute_primitives(ctx->graph, ctx->features));
}
BENCHMARK(BM_Primitives)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace evofg
