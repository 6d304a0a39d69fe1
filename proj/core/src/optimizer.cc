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

#include "evofg/optimizer.h"

#include <cmath>

#include "evofg/error.h"

namespace evofg {

void ParameterList::add(std::string name, Matrix value) {
  if (contains(name)) throw ContractError("duplicate parameter '" + name + "'");
  params_.push_back({std::move(name), std::move(value)});
}

std::size_t ParameterList::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return i;
  }
  throw ReferenceError("no parameter named '" + name + "'");
}

bool ParameterList::contains(const std::string& name) const {
  for (const auto& p : params_) {
    if (p.name == name) return true;
  }
  return false;
}

Matrix& ParameterList::at(const std::string& name) { return params_[index_of(name)].value; }

const Matrix& ParameterList::at(const std::string& name) const {
  return params_[index_of(name)].value;
}

void ParameterList::replace(const std::string& name, Matrix value) {
  params_[index_of(name)].value = std::move(value);
}

Index ParameterList::total_size() const {
  Index n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

std::vector<double> ParameterList::flatten() const {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(total_size()));
  for (const auto& p : params_) {
    flat.insert(flat.end(), p.value.data(), p.value.data() + p.value.size());
  }
  return flat;
}

void ParameterList::assign_flat(std::span<const double> flat) {
  if (static_cast<Index>(flat.size()) != total_size()) {
    throw ShapeError("assign_flat: size mismatch");
  }
  std::size_t off = 0;
  for (auto& p : params_) {
    std::copy(flat.begin() + off, flat.begin() + off + p.value.size(), p.value.data());
    off += static_cast<std::size_t>(p.value.size());
  }
}

bool ParameterList::all_finite() const {
  for (const auto& p : params_) {
    if (!p.value.allFinite()) return false;
  }
  return true;
}

std::vector<ad::Var> ParameterList::bind(ad::Tape& tape, bool trainable) const {
  std::vector<ad::Var> out;
  out.reserve(params_.size());
  for (const auto& p : params_) {
    out.push_back(trainable ? tape.variable(p.value) : tape.constant(p.value));
  }
  return out;
}

bool operator==(const ParameterList& a, const ParameterList& b) {
  if (a.params_.size() != b.params_.size()) return false;
  for (std::size_t i = 0; i < a.params_.size(); ++i) {
    const auto& x = a.params_[i];
    const auto& y = b.params_[i];
    if (x.name != y.name || x.value.rows() != y.value.rows() ||
        x.value.cols() != y.value.cols() || x.value != y.value) {
      return false;
    }
  }
  return true;
}

std::vector<double> gather_gradient(const ad::Tape& tape, std::span<const ad::Var> bound) {
  std::vector<double> flat;
  for (const auto& v : bound) {
    const Matrix g = tape.grad(v);
    flat.insert(flat.end(), g.data(), g.data() + g.size());
  }
  return flat;
}

Matrix glorot(Index rows, Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = (2.0 * uniform01(rng) - 1.0) * limit;
  return m;
}

AdamW::AdamW(double lr, double weight_decay, double beta1, double beta2, double eps)
    : lr_(lr), wd_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamW::reset() {
  t_ = 0;
  m_.clear();
  v_.clear();
}

void AdamW::step(ParameterList& params, const std::vector<Matrix>& grads) {
  if (grads.size() != params.size()) throw ShapeError("AdamW: gradient count mismatch");
  if (m_.size() != params.size()) {
    m_.clear();
    v_.clear();
    for (const auto& p : params) {
      m_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
      v_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
    }
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& w = params[i].value;
    const Matrix& g = grads[i];
    if (g.rows() != w.rows() || g.cols() != w.cols() || m_[i].rows() != w.rows() ||
        m_[i].cols() != w.cols()) {
      throw ShapeError("AdamW: shape mismatch for '" + params[i].name + "'");
    }
    w *= (1.0 - lr_ * wd_);
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseProduct(g);
    const Matrix mhat = m_[i] / bc1;
    const Matrix vhat = v_[i] / bc2;
    w.array() -= lr_ * mhat.array() / (vhat.array().sqrt() + eps_);
  }
}

}  // namespace evofg
