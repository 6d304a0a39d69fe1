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

#include "evofg/autodiff.h"

#include <cmath>
#include <limits>
#include <string>

#include "evofg/error.h"

namespace evofg::ad {
namespace {

void same_shape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

Matrix scalar_matrix(double v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

const Matrix& Var::value() const { return tape_->value(id_); }

Var Tape::constant(Matrix value) {
  nodes_.push_back({std::move(value), Matrix(), false, nullptr});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::variable(Matrix value) {
  nodes_.push_back({std::move(value), Matrix(), true, nullptr});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::record(Matrix value, std::initializer_list<Var> inputs, Backward fn) {
  return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(fn));
}

Var Tape::record(Matrix value, std::span<const Var> inputs, Backward fn) {
  bool needs = false;
  for (const Var& in : inputs) {
    if (in.tape() != this) throw ContractError("autodiff: mixing tapes");
    needs = needs || nodes_[in.id()].needs_grad;
  }
  nodes_.push_back({std::move(value), Matrix(), needs, needs ? std::move(fn) : nullptr});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Tape::accumulate(int id, const Matrix& g) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return;
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

void Tape::backward(const Var& root) {
  if (root.rows() != 1 || root.cols() != 1) {
    throw ShapeError("backward: root must be 1x1");
  }
  for (Node& n : nodes_) n.grad.resize(0, 0);
  nodes_[root.id()].grad = scalar_matrix(1.0);
  for (int i = root.id(); i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.backward && n.grad.size() != 0) n.backward(*this, n.grad);
  }
}

Matrix Tape::grad(const Var& v) const {
  const Node& n = nodes_[v.id()];
  if (n.grad.size() == 0) return Matrix::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

Var matmul(const Var& a, const Var& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimension mismatch");
  Tape& t = *a.tape();
  const int ia = a.id(), ib = b.id();
  return t.record(a.value() * b.value(), {a, b}, [ia, ib](Tape& t, const Matrix& g) {
    if (t.needs_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
    if (t.needs_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
  });
}

Var matmul_nt(const Var& a, const Var& b) {
  if (a.cols() != b.cols()) throw ShapeError("matmul_nt: inner dimension mismatch");
  Tape& t = *a.tape();
  const int ia = a.id(), ib = b.id();
  return t.record(a.value() * b.value().transpose(), {a, b},
                  [ia, ib](Tape& t, const Matrix& g) {
                    if (t.needs_grad(ia)) t.accumulate(ia, g * t.value(ib));
                    if (t.needs_grad(ib)) t.accumulate(ib, g.transpose() * t.value(ia));
                  });
}

Var spmm(const SparseMatrix& s, const Var& x) {
  if (s.cols() != x.rows()) throw ShapeError("spmm: dimension mismatch");
  Tape& t = *x.tape();
  const int ix = x.id();
  const SparseMatrix* sp = &s;
  return t.record(Matrix(s * x.value()), {x}, [ix, sp](Tape& t, const Matrix& g) {
    t.accumulate(ix, Matrix(sp->transpose() * g));
  });
}

Var add(const Var& a, const Var& b) {
  same_shape(a, b, "add");
  Tape& t = *a.tape();
  const int ia = a.id(), ib = b.id();
  return t.record(a.value() + b.value(), {a, b}, [ia, ib](Tape& t, const Matrix& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, g);
  });
}

Var sub(const Var& a, const Var& b) {
  same_shape(a, b, "sub");
  Tape& t = *a.tape();
  const int ia = a.id(), ib = b.id();
  return t.record(a.value() - b.value(), {a, b}, [ia, ib](Tape& t, const Matrix& g) {
    t.accumulate(ia, g);
    if (t.needs_grad(ib)) t.accumulate(ib, -g);
  });
}

Var mul(const Var& a, const Var& b) {
  same_shape(a, b, "mul");
  Tape& t = *a.tape();
  const int ia = a.id(), ib = b.id();
  return t.record(a.value().cwiseProduct(b.value()), {a, b},
                  [ia, ib](Tape& t, const Matrix& g) {
                    if (t.needs_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.value(ib)));
                    if (t.needs_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.value(ia)));
                  });
}

Var scale(const Var& a, double c) {
  Tape& t = *a.tape();
  const int ia = a.id();
  return t.record(a.value() * c, {a},
                  [ia, c](Tape& t, const Matrix& g) { t.accumulate(ia, g * c); });
}

Var add_scalar(const Var& a, double c) {
  Tape& t = *a.tape();
  const int ia = a.id();
  return t.record((a.value().array() + c).matrix(), {a},
                  [ia](Tape& t, const Matrix& g) { t.accumulate(ia, g); });
}

Var mul_const(const Var& a, const Matrix& m) {
  if (a.rows() != m.rows() || a.cols() != m.cols()) throw ShapeError("mul_const: shape mismatch");
  Tape& t = *a.tape();
  const int ia = a.id();
  return t.record(a.value().cwiseProduct(m), {a},
                  [ia, m](Tape& t, const Matrix& g) { t.accumulate(ia, g.cwiseProduct(m)); });
}

Var tanh(const Var& a) {
  Tape& t = *a.tape();
  const int ia = a.id();
  Matrix y = a.value().array().tanh().matrix();
  const int out_id = static_cast<int>(t.size());
  return t.record(std::move(y), {a}, [ia, out_id](Tape& t, const Matrix& g) {
    const Matrix& y = t.value(out_id);
    t.accumulate(ia, g.cwiseProduct((1.0 - y.array().square()).matrix()));
  });
}

Var relu(const Var& a) { return leaky_relu(a, 0.0); }

Var leaky_relu(const Var& a, double slope) {
  Tape& t = *a.tape();
  const int ia = a.id();
  Matrix y = a.value().unaryExpr([slope](double v) { return v > 0 ? v : slope * v; });
  return t.record(std::move(y), {a}, [ia, slope](Tape& t, const Matrix& g) {
    const Matrix d =
        t.value(ia).unaryExpr([slope](double v) { return v > 0 ? 1.0 : slope; });
    t.accumulate(ia, g.cwiseProduct(d));
  });
}

Var softplus(const Var& a) {
  Tape& t = *a.tape();
  const int ia = a.id();
  Matrix y = a.value().unaryExpr([](double v) {
    return v > 30.0 ? v : std::log1p(std::exp(v));
  });
  return t.record(std::move(y), {a}, [ia](Tape& t, const Matrix& g) {
    const Matrix s = t.value(ia).unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
    t.accumulate(ia, g.cwiseProduct(s));
  });
}

Var add_row(const Var& a, const Var& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) throw ShapeError("add_row: shape mismatch");
  Tape& t = *a.tape();
  const int ia = a.id(), ir = row.id();
  Matrix y = a.value().rowwise() + row.value().row(0);
  return t.record(std::move(y), {a, row}, [ia, ir](Tape& t, const Matrix& g) {
    t.accumulate(ia, g);
    if (t.needs_grad(ir)) t.accumulate(ir, g.colwise().sum());
  });
}

Var mul_col(const Var& a, const Var& col) {
  if (col.cols() != 1 || col.rows() != a.rows()) throw ShapeError("mul_col: shape mismatch");
  Tape& t = *a.tape();
  const int ia = a.id(), ic = col.id();
  Matrix y = a.value().array().colwise() * col.value().col(0).array();
  return t.record(std::move(y), {a, col}, [ia, ic](Tape& t, const Matrix& g) {
    if (t.needs_grad(ia)) {
      t.accumulate(ia, (g.array().colwise() * t.value(ic).col(0).array()).matrix());
    }
    if (t.needs_grad(ic)) {
      t.accumulate(ic, g.cwiseProduct(t.value(ia)).rowwise().sum());
    }
  });
}

Var mul_scalar(const Var& s, const Var& a) {
  if (s.rows() != 1 || s.cols() != 1) throw ShapeError("mul_scalar: s must be 1x1");
  Tape& t = *a.tape();
  const int is = s.id(), ia = a.id();
  return t.record(a.value() * s.scalar(), {s, a}, [is, ia](Tape& t, const Matrix& g) {
    if (t.needs_grad(ia)) t.accumulate(ia, g * t.value(is)(0, 0));
    if (t.needs_grad(is)) t.accumulate(is, scalar_matrix(g.cwiseProduct(t.value(ia)).sum()));
  });
}

Var element(const Var& a, Index i, Index j) {
  Tape& t = *a.tape();
  const int ia = a.id();
  const Index r = a.rows(), c = a.cols();
  return t.record(scalar_matrix(a.value()(i, j)), {a}, [ia, i, j, r, c](Tape& t, const Matrix& g) {
    Matrix d = Matrix::Zero(r, c);
    d(i, j) = g(0, 0);
    t.accumulate(ia, d);
  });
}

Var column(const Var& a, Index j) {
  Tape& t = *a.tape();
  const int ia = a.id();
  const Index r = a.rows(), c = a.cols();
  return t.record(Matrix(a.value().col(j)), {a}, [ia, j, r, c](Tape& t, const Matrix& g) {
    Matrix d = Matrix::Zero(r, c);
    d.col(j) = g.col(0);
    t.accumulate(ia, d);
  });
}

Var softmax_rows(const Var& a) {
  Tape& t = *a.tape();
  const int ia = a.id();
  Matrix y = a.value();
  for (Index i = 0; i < y.rows(); ++i) {
    const double mx = y.row(i).maxCoeff();
    y.row(i) = (y.row(i).array() - mx).exp().matrix();
    y.row(i) /= y.row(i).sum();
  }
  const int out_id = static_cast<int>(t.size());
  return t.record(std::move(y), {a}, [ia, out_id](Tape& t, const Matrix& g) {
    const Matrix& y = t.value(out_id);
    const Eigen::VectorXd inner = g.cwiseProduct(y).rowwise().sum();
    Matrix d = y.cwiseProduct((g.colwise() - inner));
    t.accumulate(ia, d);
  });
}

Var log_softmax_rows(const Var& a) {
  Tape& t = *a.tape();
  const int ia = a.id();
  Matrix y = a.value();
  for (Index i = 0; i < y.rows(); ++i) {
    const double mx = y.row(i).maxCoeff();
    const double lse = mx + std::log((y.row(i).array() - mx).exp().sum());
    y.row(i).array() -= lse;
  }
  const int out_id = static_cast<int>(t.size());
  return t.record(std::move(y), {a}, [ia, out_id](Tape& t, const Matrix& g) {
    const Matrix p = t.value(out_id).array().exp().matrix();
    const Eigen::VectorXd gs = g.rowwise().sum();
    t.accumulate(ia, g - Matrix(p.array().colwise() * gs.array()));
  });
}

Var gather_rows(const Var& a, std::span<const int> rows) {
  Tape& t = *a.tape();
  const int ia = a.id();
  Matrix y(static_cast<Index>(rows.size()), a.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= a.rows()) throw RangeError("gather_rows: index out of range");
    y.row(static_cast<Index>(k)) = a.value().row(rows[k]);
  }
  std::vector<int> idx(rows.begin(), rows.end());
  const Index r = a.rows(), c = a.cols();
  return t.record(std::move(y), {a}, [ia, idx = std::move(idx), r, c](Tape& t, const Matrix& g) {
    Matrix d = Matrix::Zero(r, c);
    for (std::size_t k = 0; k < idx.size(); ++k) d.row(idx[k]) += g.row(static_cast<Index>(k));
    t.accumulate(ia, d);
  });
}

Var row_cosine(const Var& a, const Var& b) {
  same_shape(a, b, "row_cosine");
  Tape& t = *a.tape();
  const int ia = a.id(), ib = b.id();
  const Index n = a.rows();
  Matrix y(n, 1);
  for (Index i = 0; i < n; ++i) {
    const double na = a.value().row(i).norm();
    const double nb = b.value().row(i).norm();
    y(i, 0) = (na == 0.0 || nb == 0.0) ? 0.0 : a.value().row(i).dot(b.value().row(i)) / (na * nb);
  }
  const int out_id = static_cast<int>(t.size());
  return t.record(std::move(y), {a, b}, [ia, ib, out_id](Tape& t, const Matrix& g) {
    const Matrix& A = t.value(ia);
    const Matrix& B = t.value(ib);
    const Matrix& c = t.value(out_id);
    Matrix da = Matrix::Zero(A.rows(), A.cols());
    Matrix db = Matrix::Zero(B.rows(), B.cols());
    for (Index i = 0; i < A.rows(); ++i) {
      const double na = A.row(i).norm();
      const double nb = B.row(i).norm();
      if (na == 0.0 || nb == 0.0) continue;
      const double gi = g(i, 0);
      da.row(i) = gi * (B.row(i) / (na * nb) - c(i, 0) * A.row(i) / (na * na));
      db.row(i) = gi * (A.row(i) / (na * nb) - c(i, 0) * B.row(i) / (nb * nb));
    }
    if (t.needs_grad(ia)) t.accumulate(ia, da);
    if (t.needs_grad(ib)) t.accumulate(ib, db);
  });
}

Var sum(const Var& a) {
  Tape& t = *a.tape();
  const int ia = a.id();
  const Index r = a.rows(), c = a.cols();
  return t.record(scalar_matrix(a.value().sum()), {a}, [ia, r, c](Tape& t, const Matrix& g) {
    t.accumulate(ia, Matrix::Constant(r, c, g(0, 0)));
  });
}

Var mean(const Var& a) {
  const double n = static_cast<double>(a.value().size());
  return scale(sum(a), n > 0 ? 1.0 / n : 0.0);
}

Var col_sums(const Var& a) {
  Tape& t = *a.tape();
  const int ia = a.id();
  const Index r = a.rows();
  return t.record(Matrix(a.value().colwise().sum()), {a}, [ia, r](Tape& t, const Matrix& g) {
    t.accumulate(ia, g.replicate(r, 1));
  });
}

Var dot_const(const Var& a, const Matrix& w) {
  if (a.rows() != w.rows() || a.cols() != w.cols()) throw ShapeError("dot_const: shape mismatch");
  Tape& t = *a.tape();
  const int ia = a.id();
  return t.record(scalar_matrix(a.value().cwiseProduct(w).sum()), {a},
                  [ia, w](Tape& t, const Matrix& g) { t.accumulate(ia, w * g(0, 0)); });
}

Var concat_scalars(std::span<const Var> xs) {
  if (xs.empty()) throw ShapeError("concat_scalars: empty input");
  Tape& t = *xs.front().tape();
  Matrix y(1, static_cast<Index>(xs.size()));
  std::vector<int> ids;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (xs[k].rows() != 1 || xs[k].cols() != 1) throw ShapeError("concat_scalars: inputs must be 1x1");
    y(0, static_cast<Index>(k)) = xs[k].scalar();
    ids.push_back(xs[k].id());
  }
  return t.record(std::move(y), xs, [ids = std::move(ids)](Tape& t, const Matrix& g) {
    for (std::size_t k = 0; k < ids.size(); ++k) {
      t.accumulate(ids[k], scalar_matrix(g(0, static_cast<Index>(k))));
    }
  });
}

namespace {

// Mean about the first entry, exact when all entries are equal.
double shifted_mean(const Matrix& v) {
  const double ref = v.data()[0];
  return ref + (v.array() - ref).sum() / static_cast<double>(v.size());
}

}  // namespace

Var mean_plus_var(const Var& x, double lambda) {
  if (x.value().size() == 0) throw ShapeError("mean_plus_var: empty input");
  Tape& t = *x.tape();
  const int ix = x.id();
  const double n = static_cast<double>(x.value().size());
  const double mu = shifted_mean(x.value());
  const double var = (x.value().array() - mu).square().sum() / n;
  return t.record(scalar_matrix(mu + lambda * var), {x}, [ix, lambda, n](Tape& t, const Matrix& g) {
    const Matrix& v = t.value(ix);
    const double mu = shifted_mean(v);
    Matrix d = ((1.0 / n) + lambda * 2.0 * (v.array() - mu) / n).matrix();
    t.accumulate(ix, d * g(0, 0));
  });
}

Var cv_squared(const Var& x) {
  if (x.rows() != 1) throw ShapeError("cv_squared: expects a row vector");
  Tape& t = *x.tape();
  const int ix = x.id();
  const double n = static_cast<double>(x.cols());
  const double mu = x.value().mean();
  const double var = (x.value().array() - mu).square().sum() / n;
  const double value = mu == 0.0 ? 0.0 : var / (mu * mu);
  return t.record(scalar_matrix(value), {x}, [ix, n](Tape& t, const Matrix& g) {
    const Matrix& v = t.value(ix);
    const double mu = v.mean();
    if (mu == 0.0) return;
    const double var = (v.array() - mu).square().sum() / n;
    Matrix d = (2.0 * (v.array() - mu) / (n * mu * mu) - 2.0 * var / (n * mu * mu * mu)).matrix();
    t.accumulate(ix, d * g(0, 0));
  });
}

Var shift_min(const Var& x) {
  if (x.rows() != 1) throw ShapeError("shift_min: expects a row vector");
  Tape& t = *x.tape();
  const int ix = x.id();
  Index arg = 0;
  const double mn = x.value().row(0).minCoeff(&arg);
  return t.record((x.value().array() - mn).matrix(), {x}, [ix, arg](Tape& t, const Matrix& g) {
    Matrix d = g;
    d(0, arg) -= g.sum();
    t.accumulate(ix, d);
  });
}

Var edge_softmax_aggregate(const Var& src, const Var& dst, const Var& z,
                           const Neighborhoods& nbrs, double slope) {
  const Index n = z.rows();
  if (src.rows() != n || dst.rows() != n || src.cols() != 1 || dst.cols() != 1 ||
      static_cast<Index>(nbrs.offsets.size()) != n + 1) {
    throw ShapeError("edge_softmax_aggregate: shape mismatch");
  }
  Tape& t = *z.tape();
  const Matrix& s = src.value();
  const Matrix& d = dst.value();
  const Matrix& zv = z.value();
  std::vector<double> alpha(nbrs.indices.size());
  std::vector<double> pre(nbrs.indices.size());
  Matrix out = Matrix::Zero(n, z.cols());
  for (Index i = 0; i < n; ++i) {
    const int b = nbrs.offsets[i], e = nbrs.offsets[i + 1];
    if (b == e) continue;
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = b; k < e; ++k) {
      const double p = s(i, 0) + d(nbrs.indices[k], 0);
      pre[k] = p;
      const double l = p > 0 ? p : slope * p;
      alpha[k] = l;
      mx = std::max(mx, l);
    }
    double total = 0.0;
    for (int k = b; k < e; ++k) {
      alpha[k] = std::exp(alpha[k] - mx);
      total += alpha[k];
    }
    for (int k = b; k < e; ++k) {
      alpha[k] /= total;
      out.row(i) += alpha[k] * zv.row(nbrs.indices[k]);
    }
  }
  const int is = src.id(), id = dst.id(), iz = z.id();
  const Neighborhoods* nb = &nbrs;
  return t.record(std::move(out), {src, dst, z},
                  [is, id, iz, nb, slope, alpha = std::move(alpha), pre = std::move(pre)](
                      Tape& t, const Matrix& g) {
                    const Matrix& zv = t.value(iz);
                    const Index n = zv.rows();
                    Matrix dz = Matrix::Zero(n, zv.cols());
                    Matrix ds = Matrix::Zero(n, 1);
                    Matrix dd = Matrix::Zero(n, 1);
                    for (Index i = 0; i < n; ++i) {
                      const int b = nb->offsets[i], e = nb->offsets[i + 1];
                      if (b == e) continue;
                      double weighted = 0.0;
                      for (int k = b; k < e; ++k) {
                        const int j = nb->indices[k];
                        dz.row(j) += alpha[k] * g.row(i);
                        weighted += alpha[k] * g.row(i).dot(zv.row(j));
                      }
                      for (int k = b; k < e; ++k) {
                        const int j = nb->indices[k];
                        const double dalpha = g.row(i).dot(zv.row(j));
                        const double de = alpha[k] * (dalpha - weighted);
                        const double dp = de * (pre[k] > 0 ? 1.0 : slope);
                        ds(i, 0) += dp;
                        dd(j, 0) += dp;
                      }
                    }
                    if (t.needs_grad(iz)) t.accumulate(iz, dz);
                    if (t.needs_grad(is)) t.accumulate(is, ds);
                    if (t.needs_grad(id)) t.accumulate(id, dd);
                  });
}

}  // namespace evofg::ad
