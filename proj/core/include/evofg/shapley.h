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

#ifndef EVOFG_SHAPLEY_H_
#define EVOFG_SHAPLEY_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace evofg {

// v(S) for a subset given as a membership mask over the features.
using UtilityFn = std::function<double(const std::vector<bool>& subset)>;

struct ShapleyStats {
  std::vector<std::vector<double>> samples;  // [feature][iteration]
  std::vector<double> mean;
  std::vector<double> stddev;  // sample standard deviation (0 when T = 1)
  std::vector<double> std_err;
  // mean / SE; with SE = 0 it is +inf for a positive mean, -inf for a
  // negative one and 0 for a zero mean.
  std::vector<double> z;
  int iterations = 0;
  long eval_count = 0;

  int num_features() const { return static_cast<int>(mean.size()); }
};

// Complementary-subset sampling: each iteration splits the features by a
// fair coin into S1 and S2, evaluates v(S1) and v(S2) once, and records one
// marginal contribution per feature against the opposite half. Costs
// T * (n + 2) utility calls. Utility exceptions are rethrown as Error naming
// the subset.
ShapleyStats estimate_contributions(int num_features, const UtilityFn& utility, int iterations,
                                    std::uint64_t seed);

struct Selection {
  std::vector<bool> keep;
  bool guard_triggered = false;  // everything failed; the top-1 was kept
};

// Keep f when mean >= 0 or z >= z_crit; never returns an empty set.
Selection select_features(const ShapleyStats& stats, double z_crit);

inline constexpr int kExactShapleyLimit = 15;

// Permutation-weighted enumeration over all subsets. Throws ParameterError
// above 15 features.
std::vector<double> exact_shapley(int num_features, const UtilityFn& utility);

// Tab-separated table: feature, mean, se, z, kept.
void write_stats(const std::filesystem::path& path, const ShapleyStats& stats,
                 const std::vector<std::string>& names, const Selection& selection);

}  // namespace evofg

#endif  // EVOFG_SHAPLEY_H_
