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

#ifndef EVOFG_OPTIMIZER_H_
#define EVOFG_OPTIMIZER_H_

#include <string>
#include <vector>

#include "evofg/autodiff.h"
#include "evofg/matrix.h"
#include "evofg/rng.h"

namespace evofg {

struct Parameter {
  std::string name;
  Matrix value;
};

// Ordered, named tensors. Order is part of the checkpoint format.
class ParameterList {
 public:
  void add(std::string name, Matrix value);
  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return params_[i]; }
  const Parameter& operator[](std::size_t i) const { return params_[i]; }
  Matrix& at(const std::string& name);
  const Matrix& at(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;
  bool contains(const std::string& name) const;
  void replace(const std::string& name, Matrix value);

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  Index total_size() const;
  std::vector<double> flatten() const;
  void assign_flat(std::span<const double> flat);
  bool all_finite() const;

  // Puts every tensor on `tape` (as variables when `trainable`).
  std::vector<ad::Var> bind(ad::Tape& tape, bool trainable) const;

  friend bool operator==(const ParameterList& a, const ParameterList& b);

 private:
  std::vector<Parameter> params_;
};

// Flattened gradient of the bound parameters, in ParameterList order.
std::vector<double> gather_gradient(const ad::Tape& tape,
                                    std::span<const ad::Var> bound);

// Glorot-uniform initialised matrix.
Matrix glorot(Index rows, Index cols, Rng& rng);

// Adam with decoupled weight decay.
class AdamW {
 public:
  AdamW(double lr, double weight_decay, double beta1 = 0.9,
        double beta2 = 0.999, double eps = 1e-8);

  // One update of `params` with gradients `grads` (same order and shapes).
  void step(ParameterList& params, const std::vector<Matrix>& grads);
  void reset();
  long steps() const { return t_; }

 private:
  double lr_, wd_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Matrix> m_, v_;
};

}  // namespace evofg

#endif  // EVOFG_OPTIMIZER_H_
