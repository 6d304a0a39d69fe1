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

#include "evofg/numeric.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "evofg/error.h"

namespace evofg {
namespace {

void check_metric_input(std::span<const double> scores,
                        std::span<const int> labels, int* positives) {
  if (scores.size() != labels.size()) {
    throw ShapeError("scores and labels differ in length");
  }
  int pos = 0;
  for (int y : labels) pos += (y == 1);
  if (pos == 0 || pos == static_cast<int>(labels.size())) {
    throw MetricError("metric undefined: labels contain a single class");
  }
  *positives = pos;
}

}  // namespace

PcaResult pca_project(const Matrix& x, int d) {
  const Index n = x.rows();
  const Index m = x.cols();
  if (d < 1 || d > std::min(n, m)) {
    throw ParameterError("pca_project: d=" + std::to_string(d) +
                         " outside [1, min(N, d_ori)]");
  }
  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / std::max<double>(1.0, n - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = eig.eigenvectors();

  PcaResult out;
  out.components = Matrix::Zero(m, d);
  out.explained_variance.assign(d, 0.0);
  const double top = std::max(values(m - 1), 0.0);
  const double tol = std::max(top, 1.0) * 1e-12 * static_cast<double>(m);
  for (int k = 0; k < d; ++k) {
    const Index src = m - 1 - k;
    if (values(src) <= tol) {
      out.rank_deficient = true;
      continue;
    }
    Eigen::VectorXd dir = vectors.col(src);
    Index arg = 0;
    dir.cwiseAbs().maxCoeff(&arg);
    if (dir(arg) < 0) dir = -dir;
    out.components.col(k) = dir;
    out.explained_variance[k] = values(src);
  }
  out.projection = centered * out.components;
  return out;
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
  int pos = 0;
  check_metric_input(scores, labels, &pos);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Mid-ranks, 1-based.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) rank_sum += mid;
    }
    i = j + 1;
  }
  const double p = pos;
  const double q = static_cast<double>(n) - p;
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
  int pos = 0;
  check_metric_input(scores, labels, &pos);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] == 1) {
      hits += 1.0;
      sum += hits / static_cast<double>(k + 1);
    }
  }
  return sum / pos;
}

CvResult coeff_variation(std::span<const double> x) {
  if (x.size() < 2) throw ParameterError("coeff_variation needs >= 2 values");
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  if (mean == 0.0) return {0.0, true};
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {std::sqrt(ss / n) / mean, false};
}

GradReport finite_diff_check(const ScalarFn& loss,
                             std::span<const double> analytic,
                             std::span<const double> params, double step) {
  if (analytic.size() != params.size()) {
    throw ShapeError("analytic gradient size != parameter count");
  }
  GradReport report;
  report.step = step;
  std::vector<double> probe(params.begin(), params.end());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + step;
    const double up = loss(probe);
    probe[i] = orig - step;
    const double down = loss(probe);
    probe[i] = orig;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("non-finite loss while probing coordinate " +
                         std::to_string(i));
    }
    const double numeric = (up - down) / (2.0 * step);
    const double denom = std::max(std::abs(numeric), 1e-8);
    const double rel = std::abs(analytic[i] - numeric) / denom;
    if (rel > report.max_rel_err || report.worst_param < 0) {
      report.max_rel_err = std::max(rel, report.max_rel_err);
      report.worst_param = static_cast<Index>(i);
      report.analytic_at_worst = analytic[i];
      report.numeric_at_worst = numeric;
    }
  }
  return report;
}

}  // namespace evofg
