//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "glassmol/concepts/selection.hpp"
#include "glassmol/descriptors/standardize.hpp"
#include "glassmol/model/encoders.hpp"

namespace glassmol::model {

struct ModelConfig {
  EncoderConfig encoder;
  int projector_hidden = 256;
  std::uint64_t seed = 0; // initialization seed

  bool operator==(const ModelConfig &) const = default;
};

struct Prediction {
  double probability = 0.5;
  double logit = 0.0;
  desc::ConceptVector concepts; // standardized; empty for the baseline
};

// Concept bottleneck classifier: encoder -> projector (d -> hidden -> K) ->
// affine head (K -> 1). The baseline variant swaps projector and head for
// an MLP d -> hidden -> 1 and has no concept layer.
class GlassMolModel {
public:
  // `stats` are the training-split z-score parameters of the K selected
  // columns, in selection order.
  GlassMolModel(const ModelConfig &config, concepts::ConceptSelection selection,
                std::shared_ptr<const desc::StandardizationStats> stats);

  static GlassMolModel make_baseline(const ModelConfig &config);

  struct Output {
    nn::Var embedding; // [B x d]
    nn::Var concepts;  // [B x K], invalid (id -1) for the baseline
    nn::Var logits;    // [B x 1]
  };
  Output forward(nn::Tape &tape, const Batch &batch) const;

  // Single-molecule inference; thread-safe on a const model.
  Prediction predict(const MoleculeInput &molecule) const;
  Prediction predict(std::string_view smiles) const;

  // The affine head applied to a standardized concept vector.
  double head_logit(const std::vector<double> &concepts) const;

  // Named parameters in a fixed order (checkpoint layout).
  nn::ParameterList parameters();
  std::size_t parameter_count() const;

  bool is_baseline() const noexcept { return baseline_; }
  int k() const noexcept { return baseline_ ? 0 : selection_.k; }
  const ModelConfig &config() const noexcept { return config_; }
  const concepts::ConceptSelection &selection() const noexcept { return selection_; }
  const std::shared_ptr<const desc::StandardizationStats> &stats() const noexcept {
    return stats_;
  }
  const nn::Linear &head() const noexcept { return head_; }
  nn::Linear &head() noexcept { return head_; }

private:
  GlassMolModel() = default;

  ModelConfig config_;
  bool baseline_ = false;
  concepts::ConceptSelection selection_;
  std::shared_ptr<const desc::StandardizationStats> stats_;
  Encoder encoder_;
  nn::Mlp projector_;    // GlassMol only
  nn::Linear head_;      // GlassMol only
  nn::Mlp baseline_head_; // baseline only
};

struct LossBreakdown {
  double task_loss = 0.0;
  double concept_loss = 0.0;
  double lambda = 0.0;
  double total = 0.0;
};

struct JointLoss {
  nn::Var total;
  LossBreakdown breakdown;
};

// Mean BCE on the logits plus lambda times the mean absolute concept error.
// `concept_targets` is [B x K] standardized; required when lambda > 0
// (MissingConcepts). The baseline never reads lambda.
JointLoss joint_loss(nn::Tape &tape, const GlassMolModel &model, const Batch &batch,
                     const nn::Tensor &labels, const nn::Tensor *concept_targets,
                     double lambda);

} // namespace glassmol::model
