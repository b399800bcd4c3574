//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "glassmol/data/curate.hpp"
#include "glassmol/model/featurize.hpp"

namespace glassmol::data {

// Featurizes every record once, in record order.
std::vector<model::MoleculeInput> featurize_all(const Dataset &dataset);

struct TrainingBatch {
  model::Batch batch;
  nn::Tensor labels;   // [B x 1]
  nn::Tensor concepts; // [B x K] standardized targets
  std::vector<std::size_t> records;
};

// Batches over the records of one split. With a shuffle seed the record
// order is a seeded permutation, otherwise record order is kept. Each batch
// is a disjoint-union graph batch plus packed token sequences.
std::vector<TrainingBatch> make_batches(const CuratedDataset &curated,
                                        const std::vector<model::MoleculeInput> &inputs,
                                        Split split, int batch_size,
                                        std::optional<std::uint64_t> shuffle_seed = std::nullopt);

} // namespace glassmol::data
