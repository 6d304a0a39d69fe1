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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "evofg/error.h"
#include "evofg/rng.h"
#include "evofg/shapley.h"
#include "test_support.h"

namespace evofg {
namespace {

unsigned mask_of(const std::vector<bool>& s) {
  unsigned m = 0;
  for (std::size_t i = 0; i < s.size(); ++i) m |= s[i] ? 1u << i : 0u;
  return m;
}

// Random game given by a lookup table over all 2^n subsets.
struct TableGame {
  std::vector<double> table;
  TableGame(int n, Rng& rng) : table(std::size_t{1} << n) {
    for (double& x : table) x = uniform01(rng);
  }
  double operator()(const std::vector<bool>& s) const { return table[mask_of(s)]; }
};

// Shapley value by averaging marginal contributions over all orderings.
std::vector<double> permutation_shapley(int n, const UtilityFn& v) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(n, 0.0);
  long count = 0;
  do {
    std::vector<bool> s(n, false);
    double prev = v(s);
    for (int f : order) {
      s[f] = true;
      const double cur = v(s);
      phi[f] += cur - prev;
      prev = cur;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= static_cast<double>(count);
  return phi;
}

double count_members(const std::vector<bool>& s) {
  return static_cast<double>(std::count(s.begin(), s.end(), true));
}

TEST(Estimate, AdditiveUtility) {
  const ShapleyStats st = estimate_contributions(6, count_members, 25, 1);
  for (int f = 0; f < 6; ++f) {
    EXPECT_EQ(st.samples[f].size(), 25u);
    for (double d : st.samples[f]) EXPECT_EQ(d, 1.0);
    EXPECT_EQ(st.mean[f], 1.0);
    EXPECT_EQ(st.stddev[f], 0.0);
    EXPECT_TRUE(std::isinf(st.z[f]) && st.z[f] > 0);
  }
}

TEST(Estimate, ConstantUtility) {
  const ShapleyStats st = estimate_contributions(4, [](const auto&) { return 3.0; }, 10, 2);
  for (int f = 0; f < 4; ++f) {
    EXPECT_EQ(st.mean[f], 0.0);
    EXPECT_EQ(st.z[f], 0.0);
  }
}

TEST(Estimate, EvalCount) {
  long calls = 0;
  const UtilityFn v = [&](const std::vector<bool>& s) {
    ++calls;
    return count_members(s);
  };
  for (int t : {1, 3, 7}) {
    calls = 0;
    const ShapleyStats st = estimate_contributions(23, v, t, 3);
    EXPECT_EQ(st.eval_count, t * 25L);
    EXPECT_EQ(calls, st.eval_count);
    EXPECT_EQ(st.iterations, t);
  }
}

TEST(Estimate, DeterministicGivenSeed) {
  Rng rng = make_rng(90);
  const TableGame g(7, rng);
  const ShapleyStats a = estimate_contributions(7, g, 30, 5);
  const ShapleyStats b = estimate_contributions(7, g, 30, 5);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.z, b.z);
  const ShapleyStats c = estimate_contributions(7, g, 30, 6);
  EXPECT_NE(a.samples, c.samples);
}

TEST(Estimate, StatisticsMatchSamples) {
  Rng rng = make_rng(91);
  const TableGame g(5, rng);
  const ShapleyStats st = estimate_contributions(5, g, 40, 7);
  for (int f = 0; f < 5; ++f) {
    const auto& x = st.samples[f];
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / 40.0;
    double ss = 0.0;
    for (double d : x) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / 39.0);
    EXPECT_NEAR(st.mean[f], mean, 1e-14);
    EXPECT_NEAR(st.stddev[f], sd, 1e-14);
    EXPECT_NEAR(st.std_err[f], sd / std::sqrt(40.0), 1e-14);
    EXPECT_NEAR(st.z[f], mean / (sd / std::sqrt(40.0)), 1e-9);
  }
}

TEST(Estimate, Preconditions) {
  EXPECT_THROW(estimate_contributions(1, count_members, 5, 1), ParameterError);
  EXPECT_THROW(estimate_contributions(3, count_members, 0, 1), ParameterError);
}

TEST(Estimate, UtilityFailureNamesSubset) {
  const UtilityFn bad = [](const std::vector<bool>& s) -> double {
    if (count_members(s) >= 2) throw std::runtime_error("boom");
    return 0.0;
  };
  try {
    estimate_contributions(4, bad, 50, 1);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("subset"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(Estimate, UnbiasedForBinomialSubsets) {
  Rng rng = make_rng(92);
  int within = 0, total = 0;
  for (int game = 0; game < 5; ++game) {
    const TableGame g(8, rng);
    const auto oracle = testing::binomial_mean_marginal(8, g);
    const ShapleyStats st = estimate_contributions(8, g, 2000, 100 + game);
    for (int f = 0; f < 8; ++f) {
      ++total;
      if (std::abs(st.mean[f] - oracle[f]) < 3.0 * st.std_err[f]) ++within;
    }
  }
  EXPECT_GE(within, static_cast<int>(std::ceil(0.95 * total)));
}

TEST(Select, Examples) {
  ShapleyStats st;
  st.mean = {0.2, -0.1, 0.0};
  st.std_err = {100.0, 100.0, 100.0};
  st.z = {0.002, -0.001, 0.0};
  Selection sel = select_features(st, 1.645);
  EXPECT_EQ(sel.keep, (std::vector<bool>{true, false, true}));
  EXPECT_FALSE(sel.guard_triggered);

  st.mean = {-0.01, 0.5};
  st.std_err = {1e-9, 1.0};
  st.z = {-1e7, 0.5};
  EXPECT_EQ(select_features(st, 1.645).keep, (std::vector<bool>{false, true}));

  st.mean = {-0.3, -0.1, -0.2};
  st.z = {-1.0, -1.0, -1.0};
  sel = select_features(st, 1.645);
  EXPECT_EQ(sel.keep, (std::vector<bool>{false, true, false}));
  EXPECT_TRUE(sel.guard_triggered);
}

TEST(Select, LoweringThresholdNeverRemoves) {
  Rng rng = make_rng(93);
  for (int trial = 0; trial < 100; ++trial) {
    const TableGame g(6, rng);
    ShapleyStats st = estimate_contributions(6, [&](const auto& s) { return g(s) - 0.5; }, 8,
                                             static_cast<std::uint64_t>(trial));
    const auto high = select_features(st, 2.5).keep;
    const auto low = select_features(st, 0.5).keep;
    for (int f = 0; f < 6; ++f) {
      if (high[f]) {
        EXPECT_TRUE(low[f]);
      }
    }
  }
}

TEST(Exact, AdditiveGame) {
  const std::vector<double> w = {0.5, -1.0, 2.0, 0.25};
  const auto phi = exact_shapley(4, [&](const std::vector<bool>& s) {
    double v = 0.0;
    for (int i = 0; i < 4; ++i) v += s[i] ? w[i] : 0.0;
    return v;
  });
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(phi[i], w[i], 1e-15);
}

TEST(Exact, AndGame) {
  const auto phi = exact_shapley(2, [](const std::vector<bool>& s) { return s[0] && s[1] ? 1.0 : 0.0; });
  EXPECT_NEAR(phi[0], 0.5, 1e-15);
  EXPECT_NEAR(phi[1], 0.5, 1e-15);
}

TEST(Exact, EfficiencyAndPermutationOracle) {
  Rng rng = make_rng(94);
  for (int trial = 0; trial < 10; ++trial) {
    const TableGame g(6, rng);
    const auto phi = exact_shapley(6, g);
    const double sum = std::accumulate(phi.begin(), phi.end(), 0.0);
    EXPECT_NEAR(sum, g(std::vector<bool>(6, true)) - g(std::vector<bool>(6, false)), 1e-12);
    const auto oracle = permutation_shapley(6, g);
    for (int f = 0; f < 6; ++f) EXPECT_NEAR(phi[f], oracle[f], 1e-12);
  }
}

TEST(Exact, SizeCap) {
  EXPECT_THROW(exact_shapley(kExactShapleyLimit + 1, count_members), ParameterError);
  EXPECT_THROW(exact_shapley(0, count_members), ParameterError);
}

TEST(WriteStats, TableHasOneRowPerFeature) {
  const ShapleyStats st = estimate_contributions(3, count_members, 4, 1);
  const Selection sel = select_features(st, 1.645);
  const auto path = testing::temp_dir("shapley") / "stats.tsv";
  write_stats(path, st, {"a", "b", "c"}, sel);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);  // header + 3
  EXPECT_THROW(write_stats(path, st, {"a"}, sel), ShapeError);
}

}  // namespace
}  // namespace evofg
