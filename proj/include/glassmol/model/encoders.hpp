//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "glassmol/model/featurize.hpp"
#include "glassmol/nn/layers.hpp"

namespace glassmol::model {

enum class Backbone { kGnn, kSequence };

std::string_view backbone_name(Backbone backbone) noexcept;
Backbone parse_backbone(std::string_view name); // UnknownBackbone (usage)

struct EncoderConfig {
  Backbone backbone = Backbone::kGnn;
  int hidden = 128;   // embedding width d
  int layers = 3;
  int embedding = 64; // byte embedding width, sequence backbone only

  bool operator==(const EncoderConfig &) const = default;
};

// f_theta: molecule batch -> [batch x hidden] embedding.
class Encoder {
public:
  Encoder() = default;
  Encoder(const EncoderConfig &config, util::Rng &rng);

  nn::Var forward(nn::Tape &tape, const Batch &batch) const;
  void collect(const std::string &prefix, nn::ParameterList &out);

  const EncoderConfig &config() const noexcept { return config_; }

private:
  EncoderConfig config_;
  std::vector<nn::GineLayer> gine_;
  nn::SequenceEncoder sequence_;
};

} // namespace glassmol::model
