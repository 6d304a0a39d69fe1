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

#include <algorithm>

#include "evofg/shapley.h"

namespace evofg {
namespace {

// Sampler overhead with a trivial utility.
void BM_EstimateContributions(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const UtilityFn v = [](const std::vector<bool>& s) {
    return static_cast<double>(std::count(s.begin(), s.end(), true));
  };
  for (auto _ : state) benchmark::DoNotOptimize(estimate_contributions(n, v, 20, 1));
  state.SetItemsProcessed(state.iterations() * 20 * (n + 2));
}
BENCHMARK(BM_EstimateContributions)->Arg(8)->Arg(23)->Arg(40);

void BM_ExactShapley(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const UtilityFn v = [](const std::vector<bool>& s) {
    return s[0] && s[1] ? 1.0 : 0.0;
  };
  for (auto _ : state) benchmark::DoNotOptimize(exact_shapley(n, v));
}
BENCHMARK(BM_ExactShapley)->DenseRange(8, 14, 3);

}  // namespace
}  // namespace evofg
