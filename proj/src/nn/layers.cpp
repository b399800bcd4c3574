//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/nn/layers.hpp"

#include <cmath>

namespace glassmol::nn {

void init_uniform_fan_in(Tensor &t, int fan_in, util::Rng &rng) {
  const Real bound = 1.0 / std::sqrt(static_cast<Real>(std::max(fan_in, 1)));
  for (Real &v : t.data)
    v = rng.uniform(-bound, bound);
}

Linear::Linear(int in, int out, util::Rng &rng)
    : weight(Tensor::zeros({out, in})), bias(Tensor::zeros({out})) {
  init_uniform_fan_in(weight, in, rng);
  init_uniform_fan_in(bias, in, rng);
  weight.requires_grad = bias.requires_grad = true;
}

Var Linear::forward(Tape &tape, Var x) const {
  return linear(x, tape.param(weight), tape.param(bias));
}

void Linear::collect(const std::string &prefix, ParameterList &out) {
  out.push_back({prefix + "weight", &weight});
  out.push_back({prefix + "bias", &bias});
}

Mlp::Mlp(const std::vector<int> &widths, util::Rng &rng) {
  for (std::size_t i = 0; i + 1 < widths.size(); ++i)
    layers.emplace_back(widths[i], widths[i + 1], rng);
}

Var Mlp::forward(Tape &tape, Var x) const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    x = layers[i].forward(tape, x);
    if (i + 1 < layers.size())
      x = relu(x);
  }
  return x;
}

void Mlp::collect(const std::string &prefix, ParameterList &out) {
  for (std::size_t i = 0; i < layers.size(); ++i)
    layers[i].collect(prefix + std::to_string(i) + ".", out);
}

GineLayer::GineLayer(int in, int edge_dim, int hidden, int out, util::Rng &rng)
    : edge_proj(edge_dim, in, rng), mlp({in, hidden, out}, rng),
      eps(Tensor::zeros({1})) {
  eps.requires_grad = true;
}

Var GineLayer::forward(Tape &tape, Var h, const EdgeIndex &edges,
                       Var edge_features) const {
  const int n = h.rows();
  if (edges.source.size() != edges.target.size() ||
      static_cast<int>(edges.size()) != edge_features.rows())
    throw_shape_mismatch("gine edges", std::to_string(edges.size()),
                         edge_features.value().shape_string());
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges.source[i] < 0 || edges.source[i] >= n || edges.target[i] < 0 ||
        edges.target[i] >= n)
      throw Error(ErrorCategory::kData, "IndexOutOfRange",
                  "edge " + std::to_string(i) + " (" +
                      std::to_string(edges.source[i]) + "->" +
                      std::to_string(edges.target[i]) + ") with " +
                      std::to_string(n) + " nodes");
  Var self = add(h, scale_by(h, tape.param(eps)));
  Var combined = self;
  if (edges.size() > 0) {
    Var messages = relu(add(gather_rows(h, edges.source),
                            edge_proj.forward(tape, edge_features)));
    combined = add(self, scatter_add_rows(messages, edges.target, n));
  }
  return mlp.forward(tape, combined);
}

void GineLayer::collect(const std::string &prefix, ParameterList &out) {
  edge_proj.collect(prefix + "edge_proj.", out);
  mlp.collect(prefix + "mlp.", out);
  out.push_back({prefix + "eps", &eps});
}

TokenBatch TokenBatch::from_sequences(const std::vector<std::string> &texts) {
  TokenBatch b;
  b.sequences = static_cast<int>(texts.size());
  for (int s = 0; s < b.sequences; ++s) {
    const int start = static_cast<int>(b.tokens.size());
    const int len = static_cast<int>(texts[s].size());
    for (int i = 0; i < len; ++i) {
      b.tokens.push_back(static_cast<unsigned char>(texts[s][i]));
      b.prev.push_back(i > 0 ? start + i - 1 : -1);
      b.next.push_back(i + 1 < len ? start + i + 1 : -1);
      b.segment.push_back(s);
    }
  }
  return b;
}

Var conv1d_width3(Tape &tape, Var x, const TokenBatch &batch,
                  const Linear &kernel) {
  Var window = concat({gather_rows(x, batch.prev), x, gather_rows(x, batch.next)}, 1);
  return kernel.forward(tape, window);
}

SequenceEncoder::SequenceEncoder(int embedding_dim, int hidden, int layers,
                                 util::Rng &rng)
    : embedding(Tensor::zeros({kVocabulary, embedding_dim})) {
  // Embedding rows are looked up, not multiplied: unit-scale init.
  init_uniform_fan_in(embedding, 1, rng);
  embedding.requires_grad = true;
  int in = embedding_dim;
  for (int l = 0; l < layers; ++l) {
    convs.emplace_back(3 * in, hidden, rng);
    in = hidden;
  }
}

Var SequenceEncoder::forward(Tape &tape, const TokenBatch &batch) const {
  Var x = gather_rows(tape.param(embedding), batch.tokens);
  for (const Linear &conv : convs)
    x = relu(conv1d_width3(tape, x, batch, conv));
  return segment_mean(x, batch.segment, batch.sequences);
}

void SequenceEncoder::collect(const std::string &prefix, ParameterList &out) {
  out.push_back({prefix + "embedding", &embedding});
  for (std::size_t i = 0; i < convs.size(); ++i)
    convs[i].collect(prefix + "conv" + std::to_string(i) + ".", out);
}

} // namespace glassmol::nn
