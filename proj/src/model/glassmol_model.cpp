//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/model/glassmol_model.hpp"

namespace glassmol::model {

GlassMolModel::GlassMolModel(const ModelConfig &config,
                             concepts::ConceptSelection selection,
                             std::shared_ptr<const desc::StandardizationStats> stats)
    : config_(config), selection_(std::move(selection)), stats_(std::move(stats)) {
  selection_.validate();
  const int k = selection_.k;
  if (stats_ && (stats_->names != selection_.names))
    throw_shape_mismatch("standardization stats vs selection",
                         std::to_string(stats_->names.size()), std::to_string(k));
  util::Rng rng(config.seed);
  encoder_ = Encoder(config.encoder, rng);
  projector_ = nn::Mlp({config.encoder.hidden, config.projector_hidden, k}, rng);
  head_ = nn::Linear(k, 1, rng);
}

GlassMolModel GlassMolModel::make_baseline(const ModelConfig &config) {
  GlassMolModel m;
  m.config_ = config;
  m.baseline_ = true;
  util::Rng rng(config.seed);
  m.encoder_ = Encoder(config.encoder, rng);
  m.baseline_head_ = nn::Mlp({config.encoder.hidden, config.projector_hidden, 1}, rng);
  return m;
}

GlassMolModel::Output GlassMolModel::forward(nn::Tape &tape, const Batch &batch) const {
  Output out;
  out.embedding = encoder_.forward(tape, batch);
  if (baseline_) {
    out.logits = baseline_head_.forward(tape, out.embedding);
  } else {
    out.concepts = projector_.forward(tape, out.embedding);
    out.logits = head_.forward(tape, out.concepts);
  }
  return out;
}

Prediction GlassMolModel::predict(const MoleculeInput &molecule) const {
  nn::Tape tape(false);
  const Batch batch = collate({&molecule});
  const Output out = forward(tape, batch);
  Prediction p;
  p.logit = out.logits.value().item();
  p.probability = nn::sigmoid(p.logit);
  if (!baseline_) {
    p.concepts.values = out.concepts.value().data;
    p.concepts.names = selection_.names;
    p.concepts.standardized = true;
    p.concepts.stats = stats_;
  }
  return p;
}

Prediction GlassMolModel::predict(std::string_view smiles) const {
  return predict(featurize(smiles));
}

double GlassMolModel::head_logit(const std::vector<double> &concepts) const {
  if (baseline_)
    throw Error(ErrorCategory::kUsage, "UnsupportedForBaseline",
                "the baseline has no concept head");
  if (static_cast<int>(concepts.size()) != selection_.k)
    throw_shape_mismatch("head input", std::to_string(concepts.size()),
                         std::to_string(selection_.k));
  double z = head_.bias.data[0];
  for (int j = 0; j < selection_.k; ++j)
    z += head_.weight.data[j] * concepts[j];
  return z;
}

nn::ParameterList GlassMolModel::parameters() {
  nn::ParameterList out;
  encoder_.collect("encoder.", out);
  if (baseline_) {
    baseline_head_.collect("head.", out);
  } else {
    projector_.collect("projector.", out);
    head_.collect("head.", out);
  }
  return out;
}

std::size_t GlassMolModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto &p : const_cast<GlassMolModel *>(this)->parameters())
    n += p.tensor->numel();
  return n;
}

JointLoss joint_loss(nn::Tape &tape, const GlassMolModel &model, const Batch &batch,
                     const nn::Tensor &labels, const nn::Tensor *concept_targets,
                     double lambda) {
  if (labels.rows() != batch.size || labels.cols() != 1)
    throw_shape_mismatch("labels", labels.shape_string(),
                         "(" + std::to_string(batch.size) + "x1)");
  const GlassMolModel::Output out = model.forward(tape, batch);
  JointLoss result;
  nn::Var task = nn::bce_with_logits(out.logits, labels);
  result.breakdown.task_loss = task.value().item();
  result.total = task;
  if (model.is_baseline()) {
    result.breakdown.total = result.breakdown.task_loss;
    return result;
  }
  if (lambda < 0)
    throw Error(ErrorCategory::kUsage, "InvalidLambda", "lambda must be >= 0");
  result.breakdown.lambda = lambda;
  if (!concept_targets) {
    if (lambda > 0)
      throw Error(ErrorCategory::kData, "MissingConcepts",
                  "lambda > 0 requires ground-truth concepts");
    result.breakdown.total = result.breakdown.task_loss;
    return result;
  }
  if (concept_targets->rows() != batch.size || concept_targets->cols() != model.k())
    throw_shape_mismatch("concept targets", concept_targets->shape_string(),
                         out.concepts.value().shape_string());
  nn::Var concept_term = nn::l1_loss(out.concepts, *concept_targets);
  result.breakdown.concept_loss = concept_term.value().item();
  if (lambda > 0)
    result.total = nn::add(task, nn::scale(concept_term, lambda));
  result.breakdown.total = result.total.value().item();
  return result;
}

} // namespace glassmol::model
