//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "glassmol/error.hpp"

namespace glassmol::nn {

using Real = double;

// Dense row-major tensor of rank 0, 1 or 2. Rank 1 [n] behaves as a 1 x n
// row wherever a matrix is expected (biases broadcast over rows).
struct Tensor {
  std::vector<int> shape;
  std::vector<Real> data;
  bool requires_grad = false;
  std::vector<Real> grad; // empty, or same size as data

  Tensor() = default;
  Tensor(std::vector<int> shape, std::vector<Real> data);

  static Tensor zeros(std::vector<int> shape);
  static Tensor scalar(Real value) { return Tensor({}, {value}); }
  static Tensor matrix(int rows, int cols, std::vector<Real> data) {
    return Tensor({rows, cols}, std::move(data));
  }

  std::size_t numel() const noexcept { return data.size(); }
  int rank() const noexcept { return static_cast<int>(shape.size()); }
  int rows() const noexcept;
  int cols() const noexcept;
  Real item() const;
  Real &at(int r, int c) { return data[static_cast<std::size_t>(r) * cols() + c]; }
  Real at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols() + c];
  }

  std::string shape_string() const;
  bool all_finite() const noexcept;
  void zero_grad();
};

class Tape;

// Handle to a value recorded on a tape.
struct Var {
  Tape *tape = nullptr;
  int id = -1;

  const Tensor &value() const;
  int rows() const { return value().rows(); }
  int cols() const { return value().cols(); }
};

// Define-by-run reverse-mode tape. Ops append nodes in execution order, so
// the node list is already topologically sorted; backward walks it once in
// reverse and accumulates gradients additively (fan-out sums).
//
// Parameters are referenced, not copied; their gradients stay on the tape
// until `gradients_to` copies them out, which keeps layers const during the
// forward pass and lets inference share a model across threads.
class Tape {
public:
  using Backward = std::function<void(Tape &, const std::vector<Real> &)>;

  // With tracking off no backward closures are kept (inference).
  explicit Tape(bool track_gradients = true) : track_(track_gradients) {}
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  // Leaf bound to a parameter; registering the same tensor twice returns the
  // same node.
  Var param(const Tensor &parameter);
  Var constant(Tensor value);

  // Records an op output. `backward` receives the output gradient.
  Var record(Tensor value, const std::vector<Var> &inputs, Backward backward);

  // Seeds d loss / d loss = 1 and propagates. Throws NotScalar.
  void backward(Var loss);

  // Gradient accumulator of node `id`, allocated (zeros) on first use.
  std::vector<Real> &grad(int id);
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  const Tensor &value(int id) const;

  // Copies d loss / d p into p->grad for every p; parameters the loss never
  // touched get zeros.
  void gradients_to(const std::vector<Tensor *> &params) const;

  bool tracking() const noexcept { return track_; }
  std::size_t size() const noexcept { return nodes_.size(); }

private:
  struct Node {
    Tensor owned;
    const Tensor *external = nullptr;
    bool needs_grad = false;
    std::vector<Real> grad;
    Backward backward;
  };

  bool track_;
  bool done_ = false;
  std::vector<Node> nodes_;
  std::unordered_map<const Tensor *, int> params_;
};

// --- primitives -----------------------------------------------------------

Var matmul(Var a, Var b);                 // [n x k] . [k x m]
Var linear(Var x, Var weight, Var bias);  // x . W^T + b, W [out x in]
Var add(Var a, Var b);                    // same shape, or b a 1 x c row
Var sub(Var a, Var b);                    // same shape
Var mul(Var a, Var b);                    // elementwise, same shape
Var scale(Var a, Real factor);
Var scale_by(Var a, Var s);               // a * s for a 1 x 1 s
Var relu(Var a);
Var sigmoid(Var a);
Var log(Var a);
Var abs(Var a);
Var sum(Var a);                           // scalar
Var mean(Var a);                          // scalar
Var sum(Var a, int axis);                 // 0: [1 x c], 1: [r x 1]
Var mean(Var a, int axis);
Var concat(const std::vector<Var> &parts, int axis); // axis 1: columns

// Row gather; index -1 yields a zero row.
Var gather_rows(Var a, const std::vector<int> &index);
// out[target[i]] += a[i]; out has `rows` rows.
Var scatter_add_rows(Var a, const std::vector<int> &target, int rows);
// Mean of the rows of each segment; empty segments give zeros.
Var segment_mean(Var a, const std::vector<int> &segment, int segments);

// --- losses ---------------------------------------------------------------

// Mean over entries of log(1 + exp(z)) - y z, computed stably.
Var bce_with_logits(Var logits, const Tensor &labels);
// Mean over all entries of |pred - target|.
Var l1_loss(Var pred, const Tensor &target);

Real sigmoid(Real z) noexcept;

} // namespace glassmol::nn
