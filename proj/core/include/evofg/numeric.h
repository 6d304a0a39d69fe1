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

#ifndef EVOFG_NUMERIC_H_
#define EVOFG_NUMERIC_H_

#include <functional>
#include <span>
#include <vector>

#include "evofg/matrix.h"

namespace evofg {

struct PcaResult {
  Matrix projection;        // N x d
  Matrix components;        // d_ori x d, unit columns (zero when padded)
  std::vector<double> explained_variance;
  bool rank_deficient = false;  // fewer than d nonzero-variance directions
};

// Projects column-centred X onto its top-d principal directions (descending
// variance). Each direction is sign-fixed so its largest-magnitude
// coordinate is positive. Throws ParameterError unless 1 <= d <= min(N, d_ori).
PcaResult pca_project(const Matrix& x, int d);

// P(score_anomaly > score_normal) + 1/2 P(tie), via mid-ranks.
// Throws MetricError if only one class is present.
double auroc(std::span<const double> scores, std::span<const int> labels);

// Average precision over descending scores; ties keep index order.
double auprc(std::span<const double> scores, std::span<const int> labels);

struct CvResult {
  double value = 0.0;
  bool zero_mean = false;
};

// Population std / mean. Returns 0 with zero_mean set when mean == 0.
CvResult coeff_variation(std::span<const double> x);

struct GradReport {
  double max_rel_err = 0.0;
  Index worst_param = -1;
  double step = 0.0;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
};

using ScalarFn = std::function<double(std::span<const double>)>;

// Central differences against `analytic`; relative error uses
// |numeric| floored at 1e-8 as denominator.
// Throws NumericError naming the coordinate if a probe is non-finite.
GradReport finite_diff_check(const ScalarFn& loss,
                             std::span<const double> analytic,
                             std::span<const double> params, double step);

}  // namespace evofg

#endif  // EVOFG_NUMERIC_H_
