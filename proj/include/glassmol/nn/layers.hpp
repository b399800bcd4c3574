//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "glassmol/nn/tensor.hpp"
#include "glassmol/util/random.hpp"

namespace glassmol::nn {

struct NamedParameter {
  std::string name;
  Tensor *tensor;
};

// Filled by each layer's collect(prefix, out), names prefixed.
using ParameterList = std::vector<NamedParameter>;

// Uniform fan-in initialization, U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
void init_uniform_fan_in(Tensor &t, int fan_in, util::Rng &rng);

class Linear {
public:
  Linear() = default;
  Linear(int in, int out, util::Rng &rng);

  Var forward(Tape &tape, Var x) const;
  void collect(const std::string &prefix, ParameterList &out);

  int in_features() const { return weight.cols(); }
  int out_features() const { return weight.rows(); }

  Tensor weight; // [out x in]
  Tensor bias;   // [out]
};

// Linear layers with relu between them (none after the last).
class Mlp {
public:
  Mlp() = default;
  Mlp(const std::vector<int> &widths, util::Rng &rng);

  Var forward(Tape &tape, Var x) const;
  void collect(const std::string &prefix, ParameterList &out);

  std::vector<Linear> layers;
};

// Directed edge list; undirected bonds appear once per direction.
struct EdgeIndex {
  std::vector<int> source;
  std::vector<int> target;

  std::size_t size() const { return source.size(); }
};

// h'_v = MLP((1 + eps) h_v + sum_{u->v} relu(h_u + W_e e_uv)).
class GineLayer {
public:
  GineLayer() = default;
  GineLayer(int in, int edge_dim, int hidden, int out, util::Rng &rng);

  // Throws IndexOutOfRange when an edge endpoint is not a node.
  Var forward(Tape &tape, Var h, const EdgeIndex &edges, Var edge_features) const;
  void collect(const std::string &prefix, ParameterList &out);

  Linear edge_proj; // edge_dim -> in
  Mlp mlp;          // in -> hidden -> out
  Tensor eps;       // scalar, starts at 0
};

// Packed token batch: tokens of all sequences back to back. Neighbour
// indices point at the previous/next token of the same sequence or -1,
// which realizes zero padding at sequence ends; `segment` maps each token
// to its sequence, so pooling only ever sees real positions.
struct TokenBatch {
  std::vector<int> tokens;
  std::vector<int> prev;
  std::vector<int> next;
  std::vector<int> segment;
  int sequences = 0;

  static TokenBatch from_sequences(const std::vector<std::string> &texts);
};

// Byte embedding, width-3 convolutions with relu, masked mean pooling.
class SequenceEncoder {
public:
  static constexpr int kVocabulary = 256;

  SequenceEncoder() = default;
  SequenceEncoder(int embedding, int hidden, int layers, util::Rng &rng);

  Var forward(Tape &tape, const TokenBatch &batch) const;
  void collect(const std::string &prefix, ParameterList &out);

  Tensor embedding; // [256 x embedding]
  std::vector<Linear> convs; // kernel laid out as [out x 3*in]: prev|self|next
};

// One width-3 convolution over packed tokens (exposed for gradient tests).
Var conv1d_width3(Tape &tape, Var x, const TokenBatch &batch, const Linear &kernel);

} // namespace glassmol::nn
