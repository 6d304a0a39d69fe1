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

#ifndef EVOFG_AUTODIFF_H_
#define EVOFG_AUTODIFF_H_

#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "evofg/matrix.h"

namespace evofg::ad {

class Tape;

// Handle to a matrix-valued node on a Tape. Cheap to copy; only valid while
// the owning Tape is alive.
class Var {
 public:
  Var() = default;
  const Matrix& value() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  // Value of a 1x1 node.
  double scalar() const { return value()(0, 0); }
  Tape* tape() const { return tape_; }
  int id() const { return id_; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Reverse-mode tape over dense matrices. Nodes are recorded in evaluation
// order; backward() walks them in reverse. Nodes whose inputs are all
// constants record no backward closure.
class Tape {
 public:
  // Called with the upstream gradient of the node; must accumulate into the
  // node's inputs via Tape::accumulate.
  using Backward = std::function<void(Tape&, const Matrix& upstream)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  Var variable(Matrix value);

  Var record(Matrix value, std::initializer_list<Var> inputs, Backward fn);
  Var record(Matrix value, std::span<const Var> inputs, Backward fn);

  // Seeds d(root)/d(root) = 1; root must be 1x1.
  void backward(const Var& root);

  // Gradient w.r.t. a node after backward(); zero matrix if untouched.
  Matrix grad(const Var& v) const;

  const Matrix& value(int id) const { return nodes_[id].value; }
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  void accumulate(int id, const Matrix& g);
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool needs_grad = false;
    Backward backward;
  };
  std::deque<Node> nodes_;
};

// --- linear algebra -------------------------------------------------------
Var matmul(const Var& a, const Var& b);
Var matmul_nt(const Var& a, const Var& b);  // a * b^T
// s * x with a constant sparse matrix; `s` must outlive the tape.
Var spmm(const SparseMatrix& s, const Var& x);

// --- elementwise ----------------------------------------------------------
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double c);
Var add_scalar(const Var& a, double c);
Var mul_const(const Var& a, const Matrix& m);
Var tanh(const Var& a);
Var relu(const Var& a);
Var leaky_relu(const Var& a, double slope);
Var softplus(const Var& a);

// --- broadcasting ---------------------------------------------------------
Var add_row(const Var& a, const Var& row);         // a + 1 row^T (row is 1 x c)
Var mul_col(const Var& a, const Var& col);         // rows of a scaled by col (N x 1)
Var mul_scalar(const Var& s, const Var& a);        // s is 1 x 1
Var element(const Var& a, Index i, Index j);       // 1 x 1
Var column(const Var& a, Index j);                 // N x 1

// --- row-wise ---------------------------------------------------------------
Var softmax_rows(const Var& a);
Var log_softmax_rows(const Var& a);
Var gather_rows(const Var& a, std::span<const int> rows);
// Cosine between matching rows; rows with a zero vector give 0 (gradient 0).
Var row_cosine(const Var& a, const Var& b);

// --- reductions -------------------------------------------------------------
Var sum(const Var& a);
Var mean(const Var& a);
Var col_sums(const Var& a);                        // 1 x c
Var dot_const(const Var& a, const Matrix& w);      // sum(a .* w), 1 x 1
Var concat_scalars(std::span<const Var> xs);       // 1 x K
// mean(x) + lambda * population variance(x), over all entries.
Var mean_plus_var(const Var& x, double lambda);
// Squared coefficient of variation of a row vector; 0 when the mean is 0.
Var cv_squared(const Var& x);
// x - min(x) for a row vector (subgradient to the argmin entry).
Var shift_min(const Var& x);

// Neighbourhoods for edge-softmax attention (CSR, self-loops included).
struct Neighborhoods {
  std::vector<int> offsets;
  std::vector<int> indices;
};

// out_i = sum_j alpha_ij z_j, alpha_i. = softmax_j(leaky(src_i + dst_j))
// over j in N(i). src, dst are N x 1; z is N x d.
Var edge_softmax_aggregate(const Var& src, const Var& dst, const Var& z,
                           const Neighborhoods& nbrs, double slope);

}  // namespace evofg::ad

#endif  // EVOFG_AUTODIFF_H_
