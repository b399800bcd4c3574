//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "glassmol/concepts/selection.hpp"
#include "glassmol/data/split.hpp"
#include "glassmol/descriptors/standardize.hpp"

namespace glassmol::data {

// Raw concept pool per record, in record order.
struct PoolTable {
  std::vector<desc::ConceptVector> raw;
  bool cache_hit = false;
};

// Computes the pool for every record, or reuses `cache` when its key
// (dataset digest, pool version) matches and its rows line up with the
// dataset. A fresh computation is written back to `cache`. DescriptorFailure
// is rethrown naming the record. Molecules are spread over `jobs` threads.
PoolTable compute_pool_table(const Dataset &dataset,
                             const std::optional<std::filesystem::path> &cache = std::nullopt,
                             int jobs = 1);

// Number of per-molecule pool computations since process start.
std::size_t descriptor_computations() noexcept;

struct CuratedDataset {
  Dataset dataset;
  SplitAssignment split;
  concepts::ConceptSelection selection;
  std::vector<desc::ConceptVector> raw;       // full pool
  std::vector<std::vector<double>> concepts;  // K standardized values, selection order
  std::shared_ptr<const desc::StandardizationStats> stats; // train rows only

  std::size_t size() const noexcept { return dataset.size(); }
};

// Gathers the selected columns and standardizes with training-split stats.
CuratedDataset curate(const Dataset &dataset, const PoolTable &pool,
                      const concepts::ConceptSelection &selection,
                      const SplitAssignment &split);

CuratedDataset curate(const Dataset &dataset, const concepts::ConceptSelection &selection,
                      const SplitAssignment &split,
                      const std::optional<std::filesystem::path> &cache = std::nullopt,
                      int jobs = 1);

// Adds i.i.d. Normal(0, sigma^2) noise to the standardized training-split
// concepts; valid and test rows are untouched. sigma = 0 returns an exact
// copy.
CuratedDataset perturb_concepts(const CuratedDataset &curated, double sigma,
                                std::uint64_t seed);

} // namespace glassmol::data
