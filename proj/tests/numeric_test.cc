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

#include <cmath>

#include "evofg/error.h"
#include "evofg/numeric.h"
#include "test_support.h"

namespace evofg {
namespace {

TEST(Pca, IdenticalRowsProjectToZero) {
  Matrix x(5, 3);
  x.rowwise() = RowVector{{1.0, -2.0, 3.0}};
  const PcaResult r = pca_project(x, 2);
  EXPECT_NEAR(r.projection.cwiseAbs().maxCoeff(), 0.0, 1e-12);
  EXPECT_TRUE(r.rank_deficient);
}

TEST(Pca, FirstComponentFollowsLargestVariance) {
  // var(x0) = 4, var(x1) = 1 on an axis-aligned cloud.
  Matrix x{{2, 0}, {-2, 0}, {0, 1}, {0, -1}, {2, 0}, {-2, 0}, {0, 1}, {0, -1}};
  const PcaResult r = pca_project(x, 2);
  EXPECT_NEAR(std::abs(r.components(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(r.components(1, 0), 0.0, 1e-12);
  EXPECT_GT(r.components(0, 0), 0.0);  // sign convention
  EXPECT_GT(r.explained_variance[0], r.explained_variance[1]);
}

TEST(Pca, FullRankPreservesDistances) {
  Rng rng = make_rng(3);
  const Matrix x = testing::random_matrix(12, 4, rng);
  const Matrix p = pca_project(x, 4).projection;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.rows(); ++j) {
      EXPECT_NEAR((x.row(i) - x.row(j)).norm(), (p.row(i) - p.row(j)).norm(), 1e-9);
    }
  }
}

TEST(Pca, ColumnsAreUncorrelated) {
  Rng rng = make_rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = testing::random_matrix(40, 8, rng) * testing::random_matrix(8, 8, rng);
    const Matrix p = pca_project(x, 5).projection;
    const Matrix c = p.rowwise() - p.colwise().mean();
    const Matrix cov = c.transpose() * c / static_cast<double>(p.rows() - 1);
    for (Index i = 0; i < cov.rows(); ++i) {
      for (Index j = 0; j < cov.cols(); ++j) {
        if (i != j) {
          EXPECT_LT(std::abs(cov(i, j)), 1e-8);
        }
      }
    }
  }
}

TEST(Pca, RejectsBadDimension) {
  const Matrix x = Matrix::Ones(4, 3);
  EXPECT_THROW(pca_project(x, 0), ParameterError);
  EXPECT_THROW(pca_project(x, 4), ParameterError);
}

TEST(Auroc, Examples) {
  const std::vector<double> s1 = {0.9, 0.8, 0.1, 0.2};
  EXPECT_DOUBLE_EQ(auroc(s1, std::vector<int>{1, 1, 0, 0}), 1.0);
  const std::vector<double> tied = {0.5, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(auroc(tied, std::vector<int>{1, 0, 0}), 0.5);
  const std::vector<double> s3 = {0.3, 0.7, 0.5};
  EXPECT_DOUBLE_EQ(auroc(s3, std::vector<int>{0, 1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(auroc(s3, std::vector<int>{0, 0, 1}), 0.5);
}

TEST(Auroc, SingleClassThrows) {
  const std::vector<double> s = {0.1, 0.2};
  EXPECT_THROW(auroc(s, std::vector<int>{0, 0}), MetricError);
  EXPECT_THROW(auprc(s, std::vector<int>{1, 1}), MetricError);
}

TEST(Auroc, InvariantUnderMonotoneTransform) {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> s(50), t(50);
    std::vector<int> y(50);
    for (int i = 0; i < 50; ++i) {
      s[i] = std::round(standard_normal(rng) * 4.0) / 4.0;  // some ties
      t[i] = std::exp(3.0 * s[i]) + 1.0;
      y[i] = i % 4 == 0;
    }
    EXPECT_DOUBLE_EQ(auroc(s, y), auroc(t, y));
  }
}

TEST(Auprc, Examples) {
  const std::vector<double> perfect = {0.9, 0.8, 0.2, 0.1};
  EXPECT_DOUBLE_EQ(auprc(perfect, std::vector<int>{1, 1, 0, 0}), 1.0);
  const std::vector<double> s = {0.9, 0.8, 0.7};
  EXPECT_DOUBLE_EQ(auprc(s, std::vector<int>{0, 1, 0}), 0.5);
  const std::vector<double> last = {5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(auprc(last, std::vector<int>{0, 0, 0, 0, 1}), 0.2);
}

TEST(Metrics, AgreeWithBruteForce) {
  Rng rng = make_rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 199));
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = static_cast<double>(uniform_index(rng, 20));
      y[i] = uniform01(rng) < 0.3;
    }
    y[0] = 1;
    y[1] = 0;
    ASSERT_NEAR(auroc(s, y), testing::brute_auroc(s, y), 1e-12);
    ASSERT_NEAR(auprc(s, y), testing::brute_auprc(s, y), 1e-12);
  }
}

TEST(CoeffVariation, Examples) {
  EXPECT_DOUBLE_EQ(coeff_variation(std::vector<double>{1, 1, 1, 1}).value, 0.0);
  EXPECT_DOUBLE_EQ(coeff_variation(std::vector<double>{0, 2}).value, 1.0);
  EXPECT_NEAR(coeff_variation(std::vector<double>{3, 3, 3, 9}).value, std::sqrt(27.0 / 4.0) / 4.5, 1e-12);
  const CvResult zero = coeff_variation(std::vector<double>{0, 0, 0});
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_TRUE(zero.zero_mean);
}

TEST(CoeffVariation, ScaleInvariant) {
  Rng rng = make_rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(6), y(6);
    const double c = 0.1 + 10.0 * uniform01(rng);
    for (int i = 0; i < 6; ++i) {
      x[i] = uniform01(rng);
      y[i] = c * x[i];
    }
    EXPECT_NEAR(coeff_variation(x).value, coeff_variation(y).value, 1e-12);
  }
}

TEST(FiniteDiff, QuadraticIsExact) {
  const std::vector<double> p = {0.3, -1.2, 2.0};
  const ScalarFn f = [](std::span<const double> q) {
    double s = 0.0;
    for (double v : q) s += 0.5 * v * v;
    return s;
  };
  EXPECT_LT(finite_diff_check(f, p, p, 1e-5).max_rel_err, 1e-8);
}

TEST(FiniteDiff, SoftplusSum) {
  Rng rng = make_rng(9);
  std::vector<double> p(10), grad(10);
  for (int i = 0; i < 10; ++i) {
    p[i] = standard_normal(rng);
    grad[i] = 1.0 / (1.0 + std::exp(-p[i]));
  }
  const ScalarFn f = [](std::span<const double> q) {
    double s = 0.0;
    for (double v : q) s += std::log1p(std::exp(v));
    return s;
  };
  EXPECT_LT(finite_diff_check(f, grad, p, 1e-5).max_rel_err, 1e-6);
}

TEST(FiniteDiff, DetectsWrongGradient) {
  const std::vector<double> p = {0.5, 1.5};
  const std::vector<double> wrong = {2.0 * 0.5, 2.0 * 1.5};  // true gradient is p
  const ScalarFn f = [](std::span<const double> q) { return 0.5 * (q[0] * q[0] + q[1] * q[1]); };
  const GradReport r = finite_diff_check(f, wrong, p, 1e-5);
  EXPECT_NEAR(r.max_rel_err, 1.0, 1e-6);
  EXPECT_GE(r.worst_param, 0);
}

TEST(FiniteDiff, NonFiniteProbeThrows) {
  const std::vector<double> p = {1e-7};
  const ScalarFn f = [](std::span<const double> q) { return std::log(q[0]); };
  EXPECT_THROW(finite_diff_check(f, std::vector<double>{1e7}, p, 1e-6), NumericError);
}

}  // namespace
}  // namespace evofg
