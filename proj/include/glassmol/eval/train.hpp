//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glassmol/data/batches.hpp"
#include "glassmol/model/glassmol_model.hpp"

namespace glassmol::eval {

enum class Variant { kGlassMol, kBaseline };

std::string_view variant_name(Variant variant) noexcept;
Variant parse_variant(std::string_view name); // UnknownVariant (usage)

struct TrainConfig {
  Variant variant = Variant::kGlassMol;
  model::ModelConfig model; // model.seed is derived from `seed`
  double lambda = 1.0;
  int max_epochs = 200;
  int patience = 20;
  int batch_size = 64;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0; // standardized noise on training concepts

  // Stable JSON snapshot; from_json(to_json()) == *this.
  std::string to_json() const;
  static TrainConfig from_json(std::string_view text);
  bool operator==(const TrainConfig &) const = default;
};

struct EpochLog {
  int epoch = 0;
  double task_loss = 0.0;    // mean over training batches
  double concept_loss = 0.0; // mean over training batches (0 for the baseline)
  double valid_auroc = 0.0;
};

struct SplitMetrics {
  double auroc = 0.0;
  std::optional<double> concept_mae; // absent for the baseline
};

struct RunResult {
  std::string task_id;
  Variant variant = Variant::kGlassMol;
  model::Backbone backbone = model::Backbone::kGnn;
  std::uint64_t seed = 0;
  std::string selection_method;
  int k = 0;
  double lambda = 0.0;
  std::map<data::Split, SplitMetrics> metrics;
  int best_epoch = 0;
  int epochs_run = 0;
  std::vector<EpochLog> history;
  std::string config_json;
  std::string selection_digest;
  double wall_seconds = 0.0; // kept out of the persisted report

  // Deterministic report (everything except wall time).
  std::string to_json() const;
  static RunResult from_json(std::string_view text);
};

struct Evaluation {
  std::vector<double> logits;
  std::vector<std::vector<double>> concepts;
  std::vector<int> labels;
  std::vector<std::size_t> records;
};

// Inference over one split in record order.
Evaluation evaluate(const model::GlassMolModel &model, const data::CuratedDataset &curated,
                    const std::vector<model::MoleculeInput> &inputs, data::Split split);

SplitMetrics split_metrics(const model::GlassMolModel &model,
                           const data::CuratedDataset &curated,
                           const std::vector<model::MoleculeInput> &inputs, data::Split split);

// Adam with early stopping on validation AUROC; the best-validation
// parameters are restored before the final evaluation. With `out_dir` the
// checkpoint (checkpoint.json), the report (result.json) and the wall time
// (timing.json) are written there. Throws DivergedTraining and SingleClass.
struct TrainedRun {
  RunResult result;
  model::GlassMolModel model;
};
TrainedRun train_and_eval(const data::CuratedDataset &curated,
                          const std::vector<model::MoleculeInput> &inputs,
                          const TrainConfig &config,
                          const std::optional<std::filesystem::path> &out_dir = std::nullopt);

} // namespace glassmol::eval
