//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glassmol/concepts/llm_client.hpp"
#include "glassmol/eval/train.hpp"

namespace glassmol::eval {

// Everything a task's runs share: records, the fixed split, the raw pool
// and featurized inputs.
struct Experiment {
  data::Dataset dataset;
  data::SplitAssignment split;
  data::PoolTable pool;
  std::vector<model::MoleculeInput> inputs;
  std::filesystem::path registry;                  // static selections
  std::optional<concepts::EndpointConfig> endpoint; // for method llm
};

struct ExperimentPaths {
  std::filesystem::path dataset;
  std::string task_id;                       // defaults to the file stem
  std::optional<std::filesystem::path> cache; // concept cache CSV
  std::optional<std::filesystem::path> split; // split CSV to reuse
  std::filesystem::path registry = concepts::default_registry();
};

Experiment prepare_experiment(const ExperimentPaths &paths, int jobs = 1);

struct SelectionRequest {
  concepts::SelectionMethod method = concepts::SelectionMethod::kStatic;
  int k = 40;
  std::uint64_t seed = 0; // random selection only
};

// static: registry file; random: seeded sample; lasso: L1 path on the
// standardized training split; full: the pool; llm: the configured
// endpoint (EndpointUnavailable without one).
concepts::ConceptSelection resolve_selection(const Experiment &experiment,
                                             const SelectionRequest &request);

// Standardized training-split pool matrix and labels (lasso input).
struct TrainMatrix {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};
TrainMatrix training_matrix(const Experiment &experiment);

struct RunSpec {
  TrainConfig train;
  SelectionRequest selection;
};

// Trains one run into `dir`, or reloads dir/result.json when it was
// produced by the same config and selection (resumption).
RunResult run_cached(const Experiment &experiment, const RunSpec &spec,
                     const std::filesystem::path &dir);

enum class SweepAxis { kK, kLambda, kSelector, kNoise, kBackbone };

std::string_view axis_name(SweepAxis axis) noexcept;
SweepAxis parse_axis(std::string_view name); // UnknownAxis (usage)
std::vector<std::string> default_grid(SweepAxis axis);

struct PointSummary {
  std::string value;
  std::vector<std::uint64_t> seeds;
  double test_auroc_mean = 0.0, test_auroc_std = 0.0;
  double valid_auroc_mean = 0.0, valid_auroc_std = 0.0;
  std::optional<double> valid_mae_mean, test_mae_mean;
  std::vector<RunResult> runs; // not part of the CSV
};

struct SweepReport {
  std::string task_id;
  SweepAxis axis = SweepAxis::kLambda;
  std::vector<PointSummary> points;

  // One row per grid point; reals in shortest round-trip form.
  std::string to_csv() const;
  static SweepReport from_csv(std::string_view text);
  std::string summary() const;
};

PointSummary summarize(std::string value, std::vector<RunResult> runs);

struct SweepOptions {
  TrainConfig base;
  SelectionRequest selection;
  std::vector<std::string> grid; // empty: default_grid(axis)
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::filesystem::path out_dir;
  int jobs = 1;
};

// Runs every (grid value, seed) pair with otherwise identical settings.
// Layout: out_dir/<task>/<axis>/<value>/seed<s>/ per run, plus
// aggregate.csv, runs.csv, summary.txt and chart.svg in out_dir/<task>/<axis>.
SweepReport run_sweep(const Experiment &experiment, SweepAxis axis,
                      const SweepOptions &options);

// Penultimate (concept-layer) representations of one split:
// smiles_digest,label,<concept names...>.
std::string export_embeddings(const model::GlassMolModel &model,
                              const data::CuratedDataset &curated,
                              const std::vector<model::MoleculeInput> &inputs,
                              data::Split split);

} // namespace glassmol::eval
