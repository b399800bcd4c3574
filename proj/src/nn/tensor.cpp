//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/nn/tensor.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace glassmol::nn {

namespace {

using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const Mat>;
using MMap = Eigen::Map<Mat>;

CMap view(const Tensor &t) { return CMap(t.data.data(), t.rows(), t.cols()); }
CMap view(const std::vector<Real> &g, int r, int c) {
  return CMap(g.data(), r, c);
}
MMap mview(std::vector<Real> &g, int r, int c) { return MMap(g.data(), r, c); }

Tensor make(int rows, int cols) {
  return Tensor({rows, cols},
                std::vector<Real>(static_cast<std::size_t>(rows) * cols, 0.0));
}

Tensor like(const Tensor &t) {
  return Tensor(t.shape, std::vector<Real>(t.numel(), 0.0));
}

void same_shape(const char *op, const Tensor &a, const Tensor &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw_shape_mismatch(op, a.shape_string(), b.shape_string());
}

Error index_error(const char *op, long index, long bound) {
  return Error(ErrorCategory::kData, "IndexOutOfRange",
               std::string(op) + ": index " + std::to_string(index) +
                   " outside [0, " + std::to_string(bound) + ")");
}

template <class F, class D>
Var unary(Var a, F forward, D derivative) {
  const Tensor &x = a.value();
  Tensor out = like(x);
  for (std::size_t i = 0; i < x.numel(); ++i)
    out.data[i] = forward(x.data[i]);
  return a.tape->record(std::move(out), {a},
                        [a, derivative](Tape &t, const std::vector<Real> &g) {
                          const Tensor &x = t.value(a.id);
                          auto &ga = t.grad(a.id);
                          for (std::size_t i = 0; i < g.size(); ++i)
                            ga[i] += g[i] * derivative(x.data[i]);
                        });
}

} // namespace

// --- Tensor ---------------------------------------------------------------

Tensor::Tensor(std::vector<int> shape_, std::vector<Real> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0)
      throw Error(ErrorCategory::kData, "ShapeMismatch", "negative dimension");
    n *= static_cast<std::size_t>(d);
  }
  if (shape.size() > 2)
    throw Error(ErrorCategory::kData, "ShapeMismatch",
                "rank " + std::to_string(shape.size()) + " tensors unsupported");
  if (n != data.size())
    throw Error(ErrorCategory::kData, "ShapeMismatch",
                "shape " + shape_string() + " needs " + std::to_string(n) +
                    " values, got " + std::to_string(data.size()));
}

Tensor Tensor::zeros(std::vector<int> shape) {
  std::size_t n = 1;
  for (int d : shape)
    n *= static_cast<std::size_t>(d);
  return Tensor(std::move(shape), std::vector<Real>(n, 0.0));
}

int Tensor::rows() const noexcept { return shape.size() == 2 ? shape[0] : 1; }

int Tensor::cols() const noexcept {
  if (shape.empty())
    return 1;
  return shape.back();
}

Real Tensor::item() const {
  if (data.size() != 1)
    throw Error(ErrorCategory::kData, "NotScalar",
                "item() on shape " + shape_string());
  return data[0];
}

std::string Tensor::shape_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i)
    s += (i ? "x" : "") + std::to_string(shape[i]);
  return s + ")";
}

bool Tensor::all_finite() const noexcept {
  for (Real v : data)
    if (!std::isfinite(v))
      return false;
  return true;
}

void Tensor::zero_grad() { grad.assign(data.size(), 0.0); }

const Tensor &Var::value() const { return tape->value(id); }

// --- Tape -----------------------------------------------------------------

Var Tape::param(const Tensor &parameter) {
  if (auto it = params_.find(&parameter); it != params_.end())
    return {this, it->second};
  Node n;
  n.external = &parameter;
  n.needs_grad = track_;
  nodes_.push_back(std::move(n));
  const int id = static_cast<int>(nodes_.size()) - 1;
  params_.emplace(&parameter, id);
  return {this, id};
}

Var Tape::constant(Tensor value) {
  Node n;
  n.owned = std::move(value);
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::record(Tensor value, const std::vector<Var> &inputs,
                 Backward backward) {
  Node n;
  n.owned = std::move(value);
  if (track_) {
    for (const Var &v : inputs) {
      if (v.tape != this)
        throw Error(ErrorCategory::kInternal, "ForeignVar",
                    "op input recorded on another tape");
      n.needs_grad = n.needs_grad || nodes_[v.id].needs_grad;
    }
    if (n.needs_grad)
      n.backward = std::move(backward);
  }
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

const Tensor &Tape::value(int id) const {
  const Node &n = nodes_[id];
  return n.external ? *n.external : n.owned;
}

std::vector<Real> &Tape::grad(int id) {
  Node &n = nodes_[id];
  if (n.grad.empty())
    n.grad.assign(value(id).numel(), 0.0);
  return n.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape != this)
    throw Error(ErrorCategory::kInternal, "ForeignVar", "loss on another tape");
  if (value(loss.id).numel() != 1)
    throw Error(ErrorCategory::kData, "NotScalar",
                "backward needs a scalar loss, got " +
                    value(loss.id).shape_string());
  if (done_)
    throw Error(ErrorCategory::kInternal, "TapeReused",
                "backward already ran on this tape");
  done_ = true;
  grad(loss.id)[0] = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node &n = nodes_[id];
    if (n.backward && !n.grad.empty())
      n.backward(*this, n.grad);
  }
}

void Tape::gradients_to(const std::vector<Tensor *> &params) const {
  for (Tensor *p : params) {
    auto it = params_.find(p);
    if (it != params_.end() && !nodes_[it->second].grad.empty())
      p->grad = nodes_[it->second].grad;
    else
      p->grad.assign(p->numel(), 0.0);
  }
}

// --- primitives -----------------------------------------------------------

Real sigmoid(Real z) noexcept {
  if (z >= 0)
    return 1.0 / (1.0 + std::exp(-z));
  const Real e = std::exp(z);
  return e / (1.0 + e);
}

Var matmul(Var a, Var b) {
  const Tensor &A = a.value(), &B = b.value();
  if (A.cols() != B.rows())
    throw_shape_mismatch("matmul", A.shape_string(), B.shape_string());
  Tensor out = make(A.rows(), B.cols());
  mview(out.data, A.rows(), B.cols()).noalias() = view(A) * view(B);
  return a.tape->record(std::move(out), {a, b},
                        [a, b](Tape &t, const std::vector<Real> &g) {
                          const Tensor &A = t.value(a.id), &B = t.value(b.id);
                          const auto G = view(g, A.rows(), B.cols());
                          if (t.needs_grad(a.id))
                            mview(t.grad(a.id), A.rows(), A.cols()).noalias() +=
                                G * view(B).transpose();
                          if (t.needs_grad(b.id))
                            mview(t.grad(b.id), B.rows(), B.cols()).noalias() +=
                                view(A).transpose() * G;
                        });
}

Var linear(Var x, Var weight, Var bias) {
  const Tensor &X = x.value(), &W = weight.value(), &b = bias.value();
  if (X.cols() != W.cols())
    throw_shape_mismatch("linear", X.shape_string(), W.shape_string());
  if (b.numel() != static_cast<std::size_t>(W.rows()))
    throw_shape_mismatch("linear bias", b.shape_string(), W.shape_string());
  const int n = X.rows(), out_dim = W.rows(), in_dim = W.cols();
  Tensor out = make(n, out_dim);
  auto Y = mview(out.data, n, out_dim);
  Y.noalias() = view(X) * view(W).transpose();
  Y.rowwise() += view(b.data, 1, out_dim).row(0);
  return x.tape->record(
      std::move(out), {x, weight, bias},
      [x, weight, bias, n, out_dim, in_dim](Tape &t, const std::vector<Real> &g) {
        const auto G = view(g, n, out_dim);
        if (t.needs_grad(x.id))
          mview(t.grad(x.id), n, in_dim).noalias() += G * view(t.value(weight.id));
        if (t.needs_grad(weight.id))
          mview(t.grad(weight.id), out_dim, in_dim).noalias() +=
              G.transpose() * view(t.value(x.id));
        if (t.needs_grad(bias.id))
          mview(t.grad(bias.id), 1, out_dim) += G.colwise().sum();
      });
}

Var add(Var a, Var b) {
  const Tensor &A = a.value(), &B = b.value();
  const bool broadcast = B.rows() == 1 && A.rows() != 1 && B.cols() == A.cols();
  if (!broadcast)
    same_shape("add", A, B);
  Tensor out = A;
  out.requires_grad = false;
  out.grad.clear();
  const int r = A.rows(), c = A.cols();
  if (broadcast)
    mview(out.data, r, c).rowwise() += view(B.data, 1, c).row(0);
  else
    for (std::size_t i = 0; i < out.numel(); ++i)
      out.data[i] += B.data[i];
  return a.tape->record(std::move(out), {a, b},
                        [a, b, broadcast, r, c](Tape &t, const std::vector<Real> &g) {
                          if (t.needs_grad(a.id)) {
                            auto &ga = t.grad(a.id);
                            for (std::size_t i = 0; i < g.size(); ++i)
                              ga[i] += g[i];
                          }
                          if (t.needs_grad(b.id)) {
                            auto &gb = t.grad(b.id);
                            if (broadcast)
                              mview(gb, 1, c) += view(g, r, c).colwise().sum();
                            else
                              for (std::size_t i = 0; i < g.size(); ++i)
                                gb[i] += g[i];
                          }
                        });
}

Var sub(Var a, Var b) { return add(a, scale(b, -1.0)); }

Var mul(Var a, Var b) {
  const Tensor &A = a.value(), &B = b.value();
  same_shape("mul", A, B);
  Tensor out = like(A);
  for (std::size_t i = 0; i < out.numel(); ++i)
    out.data[i] = A.data[i] * B.data[i];
  return a.tape->record(std::move(out), {a, b},
                        [a, b](Tape &t, const std::vector<Real> &g) {
                          const Tensor &A = t.value(a.id), &B = t.value(b.id);
                          if (t.needs_grad(a.id)) {
                            auto &ga = t.grad(a.id);
                            for (std::size_t i = 0; i < g.size(); ++i)
                              ga[i] += g[i] * B.data[i];
                          }
                          if (t.needs_grad(b.id)) {
                            auto &gb = t.grad(b.id);
                            for (std::size_t i = 0; i < g.size(); ++i)
                              gb[i] += g[i] * A.data[i];
                          }
                        });
}

Var scale(Var a, Real factor) {
  const Tensor &A = a.value();
  Tensor out = like(A);
  for (std::size_t i = 0; i < out.numel(); ++i)
    out.data[i] = A.data[i] * factor;
  return a.tape->record(std::move(out), {a},
                        [a, factor](Tape &t, const std::vector<Real> &g) {
                          auto &ga = t.grad(a.id);
                          for (std::size_t i = 0; i < g.size(); ++i)
                            ga[i] += g[i] * factor;
                        });
}

Var scale_by(Var a, Var s) {
  const Tensor &A = a.value(), &S = s.value();
  if (S.numel() != 1)
    throw_shape_mismatch("scale_by", A.shape_string(), S.shape_string());
  const Real f = S.data[0];
  Tensor out = like(A);
  for (std::size_t i = 0; i < out.numel(); ++i)
    out.data[i] = A.data[i] * f;
  return a.tape->record(std::move(out), {a, s},
                        [a, s](Tape &t, const std::vector<Real> &g) {
                          const Tensor &A = t.value(a.id);
                          const Real f = t.value(s.id).data[0];
                          if (t.needs_grad(a.id)) {
                            auto &ga = t.grad(a.id);
                            for (std::size_t i = 0; i < g.size(); ++i)
                              ga[i] += g[i] * f;
                          }
                          if (t.needs_grad(s.id)) {
                            Real acc = 0.0;
                            for (std::size_t i = 0; i < g.size(); ++i)
                              acc += g[i] * A.data[i];
                            t.grad(s.id)[0] += acc;
                          }
                        });
}

Var relu(Var a) {
  return unary(
      a, [](Real x) { return x > 0 ? x : 0.0; },
      [](Real x) { return x > 0 ? 1.0 : 0.0; });
}

Var sigmoid(Var a) {
  return unary(
      a, [](Real x) { return sigmoid(x); },
      [](Real x) {
        const Real s = sigmoid(x);
        return s * (1.0 - s);
      });
}

Var log(Var a) {
  return unary(
      a, [](Real x) { return std::log(x); }, [](Real x) { return 1.0 / x; });
}

Var abs(Var a) {
  return unary(
      a, [](Real x) { return std::abs(x); },
      [](Real x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); });
}

Var sum(Var a) {
  const Tensor &A = a.value();
  Real s = 0.0;
  for (Real v : A.data)
    s += v;
  return a.tape->record(Tensor::scalar(s), {a},
                        [a](Tape &t, const std::vector<Real> &g) {
                          for (Real &v : t.grad(a.id))
                            v += g[0];
                        });
}

Var mean(Var a) {
  const auto n = static_cast<Real>(a.value().numel());
  return scale(sum(a), n > 0 ? 1.0 / n : 0.0);
}

Var sum(Var a, int axis) {
  const Tensor &A = a.value();
  const int r = A.rows(), c = A.cols();
  if (axis != 0 && axis != 1)
    throw Error(ErrorCategory::kData, "ShapeMismatch",
                "sum axis " + std::to_string(axis));
  Tensor out = axis == 0 ? make(1, c) : make(r, 1);
  if (axis == 0)
    mview(out.data, 1, c) = view(A).colwise().sum();
  else
    mview(out.data, r, 1) = view(A).rowwise().sum();
  return a.tape->record(std::move(out), {a},
                        [a, axis, r, c](Tape &t, const std::vector<Real> &g) {
                          auto ga = mview(t.grad(a.id), r, c);
                          if (axis == 0)
                            ga.rowwise() += view(g, 1, c).row(0);
                          else
                            ga.colwise() += view(g, r, 1).col(0);
                        });
}

Var mean(Var a, int axis) {
  const Tensor &A = a.value();
  const int n = axis == 0 ? A.rows() : A.cols();
  return scale(sum(a, axis), n > 0 ? 1.0 / n : 0.0);
}

Var concat(const std::vector<Var> &parts, int axis) {
  if (parts.empty())
    throw Error(ErrorCategory::kData, "ShapeMismatch", "concat of nothing");
  Tape *tape = parts[0].tape;
  const Tensor &first = parts[0].value();
  int total = 0;
  for (const Var &p : parts) {
    const Tensor &v = p.value();
    if (axis == 1 ? v.rows() != first.rows() : v.cols() != first.cols())
      throw_shape_mismatch("concat", first.shape_string(), v.shape_string());
    total += axis == 1 ? v.cols() : v.rows();
  }
  const int r = axis == 1 ? first.rows() : total;
  const int c = axis == 1 ? total : first.cols();
  Tensor out = make(r, c);
  auto O = mview(out.data, r, c);
  int offset = 0;
  for (const Var &p : parts) {
    const Tensor &v = p.value();
    if (axis == 1)
      O.middleCols(offset, v.cols()) = view(v);
    else
      O.middleRows(offset, v.rows()) = view(v);
    offset += axis == 1 ? v.cols() : v.rows();
  }
  return tape->record(
      std::move(out), parts,
      [parts, axis, r, c](Tape &t, const std::vector<Real> &g) {
        const auto G = view(g, r, c);
        int offset = 0;
        for (const Var &p : parts) {
          const Tensor &v = t.value(p.id);
          if (t.needs_grad(p.id)) {
            auto gp = mview(t.grad(p.id), v.rows(), v.cols());
            if (axis == 1)
              gp += G.middleCols(offset, v.cols());
            else
              gp += G.middleRows(offset, v.rows());
          }
          offset += axis == 1 ? v.cols() : v.rows();
        }
      });
}

Var gather_rows(Var a, const std::vector<int> &index) {
  const Tensor &A = a.value();
  const int c = A.cols(), n = A.rows();
  const int m = static_cast<int>(index.size());
  Tensor out = make(m, c);
  for (int i = 0; i < m; ++i) {
    const int src = index[i];
    if (src < -1 || src >= n)
      throw index_error("gather_rows", src, n);
    if (src >= 0)
      std::copy_n(A.data.begin() + static_cast<std::ptrdiff_t>(src) * c, c,
                  out.data.begin() + static_cast<std::ptrdiff_t>(i) * c);
  }
  return a.tape->record(std::move(out), {a},
                        [a, index, c](Tape &t, const std::vector<Real> &g) {
                          auto &ga = t.grad(a.id);
                          for (std::size_t i = 0; i < index.size(); ++i) {
                            if (index[i] < 0)
                              continue;
                            Real *dst = ga.data() + static_cast<std::ptrdiff_t>(index[i]) * c;
                            const Real *src = g.data() + i * c;
                            for (int j = 0; j < c; ++j)
                              dst[j] += src[j];
                          }
                        });
}

Var scatter_add_rows(Var a, const std::vector<int> &target, int rows) {
  const Tensor &A = a.value();
  const int c = A.cols();
  if (static_cast<int>(target.size()) != A.rows())
    throw_shape_mismatch("scatter_add_rows", A.shape_string(),
                         "(" + std::to_string(target.size()) + " targets)");
  Tensor out = make(rows, c);
  for (std::size_t i = 0; i < target.size(); ++i) {
    const int dst = target[i];
    if (dst < 0 || dst >= rows)
      throw index_error("scatter_add_rows", dst, rows);
    Real *o = out.data.data() + static_cast<std::ptrdiff_t>(dst) * c;
    const Real *s = A.data.data() + i * c;
    for (int j = 0; j < c; ++j)
      o[j] += s[j];
  }
  return a.tape->record(std::move(out), {a},
                        [a, target, c](Tape &t, const std::vector<Real> &g) {
                          auto &ga = t.grad(a.id);
                          for (std::size_t i = 0; i < target.size(); ++i) {
                            const Real *src = g.data() + static_cast<std::ptrdiff_t>(target[i]) * c;
                            Real *dst = ga.data() + i * c;
                            for (int j = 0; j < c; ++j)
                              dst[j] += src[j];
                          }
                        });
}

Var segment_mean(Var a, const std::vector<int> &segment, int segments) {
  std::vector<Real> count(static_cast<std::size_t>(segments), 0.0);
  for (int s : segment) {
    if (s < 0 || s >= segments)
      throw index_error("segment_mean", s, segments);
    count[s] += 1.0;
  }
  Var summed = scatter_add_rows(a, segment, segments);
  const int c = a.value().cols();
  Tensor inv = make(segments, c);
  for (int s = 0; s < segments; ++s)
    for (int j = 0; j < c; ++j)
      inv.at(s, j) = count[s] > 0 ? 1.0 / count[s] : 0.0;
  return mul(summed, a.tape->constant(std::move(inv)));
}

Var bce_with_logits(Var logits, const Tensor &labels) {
  const Tensor &Z = logits.value();
  if (Z.numel() != labels.numel())
    throw_shape_mismatch("bce_with_logits", Z.shape_string(), labels.shape_string());
  const auto n = static_cast<Real>(Z.numel());
  Real total = 0.0;
  for (std::size_t i = 0; i < Z.numel(); ++i) {
    const Real z = Z.data[i], y = labels.data[i];
    total += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
  }
  return logits.tape->record(
      Tensor::scalar(total / n), {logits},
      [logits, labels, n](Tape &t, const std::vector<Real> &g) {
        const Tensor &Z = t.value(logits.id);
        auto &gz = t.grad(logits.id);
        for (std::size_t i = 0; i < Z.numel(); ++i)
          gz[i] += g[0] * (sigmoid(Z.data[i]) - labels.data[i]) / n;
      });
}

Var l1_loss(Var pred, const Tensor &target) {
  const Tensor &P = pred.value();
  if (P.rows() != target.rows() || P.cols() != target.cols())
    throw_shape_mismatch("l1_loss", P.shape_string(), target.shape_string());
  const auto n = static_cast<Real>(P.numel());
  Real total = 0.0;
  for (std::size_t i = 0; i < P.numel(); ++i)
    total += std::abs(P.data[i] - target.data[i]);
  return pred.tape->record(
      Tensor::scalar(n > 0 ? total / n : 0.0), {pred},
      [pred, target, n](Tape &t, const std::vector<Real> &g) {
        const Tensor &P = t.value(pred.id);
        auto &gp = t.grad(pred.id);
        for (std::size_t i = 0; i < P.numel(); ++i) {
          const Real d = P.data[i] - target.data[i];
          gp[i] += g[0] * (d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0)) / n;
        }
      });
}

} // namespace glassmol::nn
