//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/data/batches.hpp"

#include <algorithm>

#include "glassmol/util/random.hpp"

namespace glassmol::data {

std::vector<model::MoleculeInput> featurize_all(const Dataset &dataset) {
  std::vector<model::MoleculeInput> out;
  out.reserve(dataset.size());
  for (const Record &r : dataset.records)
    out.push_back(model::featurize(r.smiles));
  return out;
}

std::vector<TrainingBatch> make_batches(const CuratedDataset &curated,
                                        const std::vector<model::MoleculeInput> &inputs,
                                        Split split, int batch_size,
                                        std::optional<std::uint64_t> shuffle_seed) {
  if (batch_size < 1)
    throw Error(ErrorCategory::kUsage, "InvalidBatchSize", "batch size must be >= 1");
  if (inputs.size() != curated.size())
    throw_shape_mismatch("featurized inputs", std::to_string(inputs.size()),
                         std::to_string(curated.size()));
  std::vector<std::size_t> order = curated.split.indices(split);
  if (shuffle_seed) {
    util::Rng rng(*shuffle_seed);
    const auto perm = rng.permutation(order.size());
    std::vector<std::size_t> shuffled;
    for (std::size_t p : perm)
      shuffled.push_back(order[p]);
    order = std::move(shuffled);
  }
  const int k = curated.selection.k;
  std::vector<TrainingBatch> out;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    TrainingBatch tb;
    tb.records.assign(order.begin() + start, order.begin() + end);
    const int b = static_cast<int>(tb.records.size());
    std::vector<const model::MoleculeInput *> mols;
    tb.labels = nn::Tensor::zeros({b, 1});
    tb.concepts = nn::Tensor::zeros({b, k});
    for (int i = 0; i < b; ++i) {
      const std::size_t r = tb.records[i];
      mols.push_back(&inputs[r]);
      tb.labels.data[i] = curated.dataset.records[r].label;
      std::copy(curated.concepts[r].begin(), curated.concepts[r].end(),
                tb.concepts.data.begin() + static_cast<std::ptrdiff_t>(i) * k);
    }
    tb.batch = model::collate(mols);
    out.push_back(std::move(tb));
  }
  return out;
}

} // namespace glassmol::data
