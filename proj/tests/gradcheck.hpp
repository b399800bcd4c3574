//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// Central finite-difference gradient oracle and random layer instances.
// Relative error is measured per tensor as |g_tape - g_fd| / max(|g_tape|,
// |g_fd|) in the Euclidean norm, which stays meaningful when individual
// entries are near zero.
//
// A central difference is only valid when the loss is smooth on
// [x - eps, x + eps]. Entries whose perturbation flips the sign of any value
// recorded on the tape (a relu or abs input crossing zero) are counted as
// kink crossings and left out of the filtered error; the unfiltered error is
// reported alongside.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "glassmol/nn/layers.hpp"
#include "glassmol/nn/tensor.hpp"
#include "glassmol/util/random.hpp"

namespace glassmol::testing {

using LossFn = std::function<nn::Var(nn::Tape &)>;

struct GradReport {
  double max_relative_error = 0.0;     // kink crossings excluded
  double raw_max_relative_error = 0.0; // every entry
  std::size_t entries = 0;
  std::size_t kink_crossings = 0;
};

// Loss value plus the sign of every entry of every recorded value.
struct ForwardTrace {
  double loss = 0.0;
  std::vector<signed char> signs;
};

inline ForwardTrace forward_trace(const LossFn &loss) {
  nn::Tape tape(false);
  ForwardTrace t;
  t.loss = loss(tape).value().item();
  for (std::size_t id = 0; id < tape.size(); ++id)
    for (double v : tape.value(static_cast<int>(id)).data)
      t.signs.push_back(static_cast<signed char>((v > 0) - (v < 0)));
  return t;
}

inline double scalar_loss(const LossFn &loss) {
  nn::Tape tape(false);
  return loss(tape).value().item();
}

// Checks d loss / d leaf for every tensor in `leaves` (parameters and
// inputs alike, all registered through tape.param inside `loss`).
inline GradReport finite_difference_check(const std::vector<nn::Tensor *> &leaves,
                                          const LossFn &loss, double eps = 1e-4) {
  {
    nn::Tape tape;
    nn::Var l = loss(tape);
    tape.backward(l);
    tape.gradients_to(leaves);
  }
  const ForwardTrace base = forward_trace(loss);
  GradReport report;
  auto relative = [](double diff2, double a2, double n2) {
    const double scale = std::sqrt(std::max(a2, n2));
    return scale < 1e-10 ? std::sqrt(diff2) : std::sqrt(diff2) / scale;
  };
  for (nn::Tensor *t : leaves) {
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;    // smooth entries
    double rdiff2 = 0.0, ra2 = 0.0, rn2 = 0.0; // all entries
    for (std::size_t i = 0; i < t->numel(); ++i) {
      const double saved = t->data[i];
      t->data[i] = saved + eps;
      const ForwardTrace up = forward_trace(loss);
      t->data[i] = saved - eps;
      const ForwardTrace down = forward_trace(loss);
      t->data[i] = saved;
      const double numeric = (up.loss - down.loss) / (2 * eps);
      const double analytic = t->grad[i];
      const double d2 = (numeric - analytic) * (numeric - analytic);
      rdiff2 += d2;
      ra2 += analytic * analytic;
      rn2 += numeric * numeric;
      ++report.entries;
      if (up.signs != base.signs || down.signs != base.signs) {
        ++report.kink_crossings;
        continue;
      }
      diff2 += d2;
      a2 += analytic * analytic;
      n2 += numeric * numeric;
    }
    report.max_relative_error = std::max(report.max_relative_error, relative(diff2, a2, n2));
    report.raw_max_relative_error =
        std::max(report.raw_max_relative_error, relative(rdiff2, ra2, rn2));
  }
  return report;
}

inline nn::Tensor random_tensor(std::vector<int> shape, util::Rng &rng,
                                double lo = -1.0, double hi = 1.0) {
  nn::Tensor t = nn::Tensor::zeros(std::move(shape));
  for (double &v : t.data)
    v = rng.uniform(lo, hi);
  return t;
}

// Random connected-ish graph with both edge directions stored.
inline nn::EdgeIndex random_edges(int nodes, util::Rng &rng) {
  nn::EdgeIndex e;
  for (int v = 1; v < nodes; ++v) {
    const int u = static_cast<int>(rng.uniform_index(v));
    e.source.push_back(u);
    e.target.push_back(v);
    e.source.push_back(v);
    e.target.push_back(u);
  }
  const int extra = static_cast<int>(rng.uniform_index(nodes));
  for (int k = 0; k < extra; ++k) {
    const int u = static_cast<int>(rng.uniform_index(nodes));
    const int v = static_cast<int>(rng.uniform_index(nodes));
    if (u == v)
      continue;
    e.source.push_back(u);
    e.target.push_back(v);
    e.source.push_back(v);
    e.target.push_back(u);
  }
  return e;
}

struct GradCase {
  std::string kind;
  std::function<GradReport()> run;
};

// One random instance per call, cycling through every layer and loss kind.
// Shapes stay at or below 16 and graphs at or below 12 nodes.
inline GradCase make_grad_case(int index, std::uint64_t seed) {
  static const char *kinds[] = {"linear", "mlp",  "gine",     "sequence",
                                "pool",   "bce",  "l1",       "matmul",
                                "unary",  "concat"};
  const std::string kind = kinds[index % 10];
  auto rng = std::make_shared<util::Rng>(util::mix_seed(seed, index));
  auto dim = [rng](int lo, int hi) {
    return lo + static_cast<int>(rng->uniform_index(hi - lo + 1));
  };
  // Owned tensors live in the shared state captured by `run`.
  struct State {
    std::vector<std::unique_ptr<nn::Tensor>> tensors;
    nn::Linear linear;
    nn::Mlp mlp;
    nn::GineLayer gine;
    nn::SequenceEncoder seq;
    nn::EdgeIndex edges;
    nn::TokenBatch tokens;
    std::vector<int> segment;
    int segments = 0;
    nn::Tensor target;

    nn::Tensor *own(nn::Tensor t) {
      tensors.push_back(std::make_unique<nn::Tensor>(std::move(t)));
      return tensors.back().get();
    }
  };
  auto s = std::make_shared<State>();
  std::vector<nn::Tensor *> leaves;
  LossFn loss;

  // Contract an output against fixed random weights to get a scalar.
  auto project = [s, rng](int rows, int cols) {
    return s->own(random_tensor({rows, cols}, *rng));
  };

  if (kind == "linear") {
    const int n = dim(1, 16), in = dim(1, 16), out = dim(1, 16);
    s->linear = nn::Linear(in, out, *rng);
    nn::Tensor *x = s->own(random_tensor({n, in}, *rng));
    nn::Tensor *r = project(n, out);
    leaves = {x, &s->linear.weight, &s->linear.bias};
    loss = [s, x, r](nn::Tape &t) {
      return nn::sum(nn::mul(s->linear.forward(t, t.param(*x)), t.constant(*r)));
    };
  } else if (kind == "mlp") {
    const int n = dim(1, 12), a = dim(1, 16), b = dim(1, 16), c = dim(1, 8);
    s->mlp = nn::Mlp({a, b, c}, *rng);
    nn::Tensor *x = s->own(random_tensor({n, a}, *rng));
    nn::Tensor *r = project(n, c);
    leaves = {x};
    for (auto &l : s->mlp.layers) {
      leaves.push_back(&l.weight);
      leaves.push_back(&l.bias);
    }
    loss = [s, x, r](nn::Tape &t) {
      return nn::sum(nn::mul(s->mlp.forward(t, t.param(*x)), t.constant(*r)));
    };
  } else if (kind == "gine") {
    const int n = dim(1, 12), d = dim(2, 10), de = dim(1, 4), h = dim(2, 12),
              out = dim(1, 8);
    s->gine = nn::GineLayer(d, de, h, out, *rng);
    s->gine.eps.data[0] = rng->uniform(-0.3, 0.3);
    s->edges = random_edges(n, *rng);
    nn::Tensor *x = s->own(random_tensor({n, d}, *rng));
    nn::Tensor *e = s->own(random_tensor(
        {static_cast<int>(s->edges.size()), de}, *rng));
    nn::Tensor *r = project(n, out);
    leaves = {x, e, &s->gine.eps, &s->gine.edge_proj.weight,
              &s->gine.edge_proj.bias};
    for (auto &l : s->gine.mlp.layers) {
      leaves.push_back(&l.weight);
      leaves.push_back(&l.bias);
    }
    loss = [s, x, e, r](nn::Tape &t) {
      return nn::sum(nn::mul(
          s->gine.forward(t, t.param(*x), s->edges, t.param(*e)), t.constant(*r)));
    };
  } else if (kind == "sequence") {
    const int emb = dim(2, 8), hidden = dim(2, 10), layers = dim(1, 3);
    s->seq = nn::SequenceEncoder(emb, hidden, layers, *rng);
    std::vector<std::string> texts;
    const int count = dim(1, 4);
    for (int i = 0; i < count; ++i) {
      std::string txt;
      const int len = dim(1, 10);
      for (int j = 0; j < len; ++j)
        txt += "CNO()=c1"[rng->uniform_index(8)];
      texts.push_back(txt);
    }
    s->tokens = nn::TokenBatch::from_sequences(texts);
    nn::Tensor *r = project(count, hidden);
    leaves = {&s->seq.embedding};
    for (auto &l : s->seq.convs) {
      leaves.push_back(&l.weight);
      leaves.push_back(&l.bias);
    }
    loss = [s, r](nn::Tape &t) {
      return nn::sum(nn::mul(s->seq.forward(t, s->tokens), t.constant(*r)));
    };
  } else if (kind == "pool") {
    const int n = dim(1, 16), c = dim(1, 16);
    s->segments = dim(1, 5);
    for (int i = 0; i < n; ++i)
      s->segment.push_back(static_cast<int>(rng->uniform_index(s->segments)));
    nn::Tensor *x = s->own(random_tensor({n, c}, *rng));
    nn::Tensor *r = project(s->segments, c);
    leaves = {x};
    loss = [s, x, r](nn::Tape &t) {
      return nn::sum(nn::mul(nn::segment_mean(t.param(*x), s->segment, s->segments),
                             t.constant(*r)));
    };
  } else if (kind == "bce") {
    const int n = dim(1, 16);
    nn::Tensor *z = s->own(random_tensor({n, 1}, *rng, -4, 4));
    s->target = nn::Tensor::zeros({n, 1});
    for (double &v : s->target.data)
      v = static_cast<double>(rng->uniform_index(2));
    leaves = {z};
    loss = [s, z](nn::Tape &t) { return nn::bce_with_logits(t.param(*z), s->target); };
  } else if (kind == "l1") {
    const int n = dim(1, 16), k = dim(1, 16);
    nn::Tensor *p = s->own(random_tensor({n, k}, *rng));
    // Keep every residual clear of the kink at 0 by more than the FD step.
    s->target = *p;
    for (double &v : s->target.data)
      v += (rng->uniform_index(2) ? 1.0 : -1.0) * rng->uniform(0.01, 1.0);
    leaves = {p};
    loss = [s, p](nn::Tape &t) { return nn::l1_loss(t.param(*p), s->target); };
  } else if (kind == "matmul") {
    const int n = dim(1, 16), k = dim(1, 16), m = dim(1, 16);
    nn::Tensor *a = s->own(random_tensor({n, k}, *rng));
    nn::Tensor *b = s->own(random_tensor({k, m}, *rng));
    nn::Tensor *r = project(n, m);
    leaves = {a, b};
    loss = [a, b, r](nn::Tape &t) {
      return nn::sum(nn::mul(nn::matmul(t.param(*a), t.param(*b)), t.constant(*r)));
    };
  } else if (kind == "unary") {
    // sigmoid, log, relu, abs, scale_by, broadcast add and axis reductions.
    const int n = dim(1, 16), c = dim(1, 16);
    nn::Tensor *x = s->own(random_tensor({n, c}, *rng));
    nn::Tensor *b = s->own(random_tensor({c}, *rng));
    nn::Tensor *k = s->own(random_tensor({1}, *rng));
    nn::Tensor *r = project(1, c);
    leaves = {x, b, k};
    loss = [x, b, k, r](nn::Tape &t) {
      nn::Var v = nn::add(t.param(*x), t.param(*b));
      nn::Var a = nn::log(nn::sigmoid(v));
      nn::Var m = nn::mean(nn::mul(nn::abs(nn::scale_by(v, t.param(*k))), nn::relu(v)), 0);
      return nn::add(nn::sum(nn::mul(m, t.constant(*r))),
                     nn::mean(nn::sum(a, 1)));
    };
  } else {
    const int n = dim(1, 10), c1 = dim(1, 8), c2 = dim(1, 8);
    nn::Tensor *a = s->own(random_tensor({n, c1}, *rng));
    nn::Tensor *b = s->own(random_tensor({n, c2}, *rng));
    nn::Tensor *r = project(2 * n, c1 + c2);
    leaves = {a, b};
    loss = [a, b, r](nn::Tape &t) {
      nn::Var wide = nn::concat({t.param(*a), t.param(*b)}, 1);
      nn::Var tall = nn::concat({wide, nn::scale(wide, 2.0)}, 0);
      return nn::sum(nn::mul(tall, t.constant(*r)));
    };
  }
  return {kind, [s, leaves, loss] { return finite_difference_check(leaves, loss); }};
}

} // namespace glassmol::testing
