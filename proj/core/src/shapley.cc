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

#include "evofg/shapley.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "evofg/error.h"
#include "evofg/io.h"
#include "evofg/rng.h"

namespace evofg {

namespace {

std::string describe(const std::vector<bool>& subset) {
  std::string s = "{";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (!subset[i]) continue;
    if (s.size() > 1) s += ',';
    s += std::to_string(i);
  }
  return s + "}";
}

}  // namespace

ShapleyStats estimate_contributions(int num_features, const UtilityFn& utility, int iterations,
                                    std::uint64_t seed) {
  if (num_features < 2) throw ParameterError("need at least two features");
  if (iterations < 1) throw ParameterError("need at least one iteration");
  const auto n = static_cast<std::size_t>(num_features);
  ShapleyStats st;
  st.iterations = iterations;
  st.samples.assign(n, {});
  for (auto& s : st.samples) s.reserve(static_cast<std::size_t>(iterations));

  auto eval = [&](const std::vector<bool>& subset) {
    ++st.eval_count;
    try {
      return utility(subset);
    } catch (const std::exception& e) {
      throw Error("utility failed on subset " + describe(subset) + ": " + e.what());
    }
  };

  Rng rng = make_rng(seed, "shapley");
  std::vector<bool> first(n), second(n);
  for (int t = 0; t < iterations; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      first[i] = (rng() >> 63) != 0;
      second[i] = !first[i];
    }
    const double v_first = eval(first);
    const double v_second = eval(second);
    for (std::size_t i = 0; i < n; ++i) {
      // f joins the half it is not in.
      std::vector<bool>& base = first[i] ? second : first;
      const double v_base = first[i] ? v_second : v_first;
      base[i] = true;
      const double v_with = eval(base);
      base[i] = false;
      st.samples[i].push_back(v_with - v_base);
    }
  }

  const double t = static_cast<double>(iterations);
  for (const auto& s : st.samples) {
    double mean = 0.0;
    for (double x : s) mean += x;
    mean /= t;
    double ss = 0.0;
    for (double x : s) ss += (x - mean) * (x - mean);
    const double sd = iterations > 1 ? std::sqrt(ss / (t - 1.0)) : 0.0;
    const double se = sd / std::sqrt(t);
    double z = 0.0;
    if (se > 0.0) {
      z = mean / se;
    } else if (mean > 0.0) {
      z = std::numeric_limits<double>::infinity();
    } else if (mean < 0.0) {
      z = -std::numeric_limits<double>::infinity();
    }
    st.mean.push_back(mean);
    st.stddev.push_back(sd);
    st.std_err.push_back(se);
    st.z.push_back(z);
  }
  return st;
}

Selection select_features(const ShapleyStats& stats, double z_crit) {
  Selection sel;
  const int n = stats.num_features();
  sel.keep.assign(static_cast<std::size_t>(n), false);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    sel.keep[i] = stats.mean[i] >= 0.0 || stats.z[i] >= z_crit;
    any = any || sel.keep[i];
  }
  if (!any && n > 0) {
    const auto best = std::max_element(stats.mean.begin(), stats.mean.end()) - stats.mean.begin();
    sel.keep[static_cast<std::size_t>(best)] = true;
    sel.guard_triggered = true;
  }
  return sel;
}

std::vector<double> exact_shapley(int num_features, const UtilityFn& utility) {
  if (num_features < 1 || num_features > kExactShapleyLimit) {
    throw ParameterError("exact Shapley supports 1.." + std::to_string(kExactShapleyLimit) +
                         " features, got " + std::to_string(num_features));
  }
  const int n = num_features;
  const std::uint32_t full = (1u << n);
  std::vector<double> value(full);
  std::vector<bool> subset(static_cast<std::size_t>(n));
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    for (int i = 0; i < n; ++i) subset[i] = (mask >> i) & 1u;
    value[mask] = utility(subset);
  }
  // weight(|S|) = |S|! (n - |S| - 1)! / n!
  std::vector<double> weight(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    weight[s] = std::exp(std::lgamma(s + 1.0) + std::lgamma(n - s + 0.0) - std::lgamma(n + 1.0));
  }
  std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    const int size = __builtin_popcount(mask);
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) continue;
      phi[i] += weight[size] * (value[mask | (1u << i)] - value[mask]);
    }
  }
  return phi;
}

void write_stats(const std::filesystem::path& path, const ShapleyStats& stats,
                 const std::vector<std::string>& names, const Selection& selection) {
  if (names.size() != static_cast<std::size_t>(stats.num_features()) ||
      selection.keep.size() != names.size()) {
    throw ShapeError("write_stats: feature count mismatch");
  }
  auto out = io::open_output(path);
  out << "feature\tmean\tse\tz\tkept\n";
  char buf[128];
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g\t%.10g\t%.6g\t%d", stats.mean[i], stats.std_err[i],
                  stats.z[i], selection.keep[i] ? 1 : 0);
    out << names[i] << '\t' << buf << '\n';
  }
}

}  // namespace evofg
