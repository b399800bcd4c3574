//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/model/encoders.hpp"

namespace glassmol::model {

std::string_view backbone_name(Backbone backbone) noexcept {
  return backbone == Backbone::kGnn ? "gnn" : "sequence";
}

Backbone parse_backbone(std::string_view name) {
  if (name == "gnn")
    return Backbone::kGnn;
  if (name == "sequence")
    return Backbone::kSequence;
  throw Error(ErrorCategory::kUsage, "UnknownBackbone",
              "backbone '" + std::string(name) + "' (expected gnn or sequence)");
}

Encoder::Encoder(const EncoderConfig &config, util::Rng &rng) : config_(config) {
  if (config.hidden < 1 || config.layers < 1 || config.embedding < 1)
    throw Error(ErrorCategory::kUsage, "InvalidConfig",
                "encoder widths and depth must be positive");
  if (config.backbone == Backbone::kGnn) {
    int in = kNodeFeatures;
    for (int l = 0; l < config.layers; ++l) {
      gine_.emplace_back(in, kEdgeFeatures, config.hidden, config.hidden, rng);
      in = config.hidden;
    }
  } else {
    sequence_ = nn::SequenceEncoder(config.embedding, config.hidden, config.layers, rng);
  }
}

nn::Var Encoder::forward(nn::Tape &tape, const Batch &batch) const {
  if (config_.backbone == Backbone::kSequence)
    return sequence_.forward(tape, batch.tokens);
  nn::Var h = tape.constant(batch.nodes);
  nn::Var e = tape.constant(batch.edge_features);
  for (std::size_t l = 0; l < gine_.size(); ++l) {
    h = gine_[l].forward(tape, h, batch.edges, e);
    if (l + 1 < gine_.size())
      h = nn::relu(h);
  }
  return nn::segment_mean(h, batch.membership, batch.size);
}

void Encoder::collect(const std::string &prefix, nn::ParameterList &out) {
  if (config_.backbone == Backbone::kSequence) {
    sequence_.collect(prefix + "sequence.", out);
    return;
  }
  for (std::size_t l = 0; l < gine_.size(); ++l)
    gine_[l].collect(prefix + "gine" + std::to_string(l) + ".", out);
}

} // namespace glassmol::model
