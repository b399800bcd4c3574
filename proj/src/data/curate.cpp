//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/data/curate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "glassmol/chem/smiles.hpp"
#include "glassmol/descriptors/concept_cache.hpp"
#include "glassmol/util/random.hpp"

namespace glassmol::data {

namespace {

std::atomic<std::size_t> g_computations{0};

desc::ConceptVector compute_one(const Record &r) {
  g_computations.fetch_add(1, std::memory_order_relaxed);
  try {
    return desc::compute_pool(chem::parse_smiles(r.smiles));
  } catch (const desc::DescriptorFailure &e) {
    throw desc::DescriptorFailure(e.descriptor(), "line " + std::to_string(r.line) + " '" +
                                                      r.smiles + "': " + e.cause());
  }
}

std::optional<std::vector<desc::ConceptVector>>
from_cache(const Dataset &dataset, const std::filesystem::path &path) {
  const auto records = desc::read_concept_cache(path, desc::CacheKey{dataset.digest});
  if (!records || records->size() != dataset.size())
    return std::nullopt;
  std::vector<desc::ConceptVector> out;
  for (std::size_t i = 0; i < records->size(); ++i) {
    if ((*records)[i].smiles != dataset.records[i].smiles)
      return std::nullopt;
    out.push_back((*records)[i].raw);
  }
  return out;
}

} // namespace

std::size_t descriptor_computations() noexcept { return g_computations.load(); }

PoolTable compute_pool_table(const Dataset &dataset,
                             const std::optional<std::filesystem::path> &cache, int jobs) {
  PoolTable table;
  if (cache && std::filesystem::exists(*cache)) {
    if (auto hit = from_cache(dataset, *cache)) {
      table.raw = std::move(*hit);
      table.cache_hit = true;
      return table;
    }
  }
  const std::size_t n = dataset.size();
  table.raw.resize(n);
  const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](int w) {
    try {
      for (std::size_t i = w; i < n; i += workers)
        table.raw[i] = compute_one(dataset.records[i]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w)
      threads.emplace_back(work, w);
    for (auto &t : threads)
      t.join();
  }
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  if (cache) {
    std::vector<desc::CachedRecord> rows;
    for (std::size_t i = 0; i < n; ++i)
      rows.push_back({dataset.records[i].smiles, dataset.records[i].label, table.raw[i]});
    desc::write_concept_cache(*cache, rows, desc::CacheKey{dataset.digest});
  }
  return table;
}

CuratedDataset curate(const Dataset &dataset, const PoolTable &pool,
                      const concepts::ConceptSelection &selection,
                      const SplitAssignment &split) {
  selection.validate();
  if (pool.raw.size() != dataset.size() || split.tags.size() != dataset.size())
    throw_shape_mismatch("curate inputs", std::to_string(dataset.size()) + " records",
                         std::to_string(pool.raw.size()) + " pool rows, " +
                             std::to_string(split.tags.size()) + " split tags");
  CuratedDataset c;
  c.dataset = dataset;
  c.split = split;
  c.selection = selection;
  c.raw = pool.raw;
  std::vector<desc::ConceptVector> selected, train_rows;
  selected.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    selected.push_back(desc::gather(pool.raw[i], selection.names));
    if (split.tags[i] == Split::kTrain)
      train_rows.push_back(selected.back());
  }
  if (train_rows.empty())
    throw Error(ErrorCategory::kData, "EmptySplit", "training split is empty");
  c.stats = std::make_shared<desc::StandardizationStats>(desc::fit_standardization(train_rows));
  for (auto &v : desc::standardize(selected, c.stats).first)
    c.concepts.push_back(std::move(v.values));
  return c;
}

CuratedDataset curate(const Dataset &dataset, const concepts::ConceptSelection &selection,
                      const SplitAssignment &split,
                      const std::optional<std::filesystem::path> &cache, int jobs) {
  return curate(dataset, compute_pool_table(dataset, cache, jobs), selection, split);
}

CuratedDataset perturb_concepts(const CuratedDataset &curated, double sigma,
                                std::uint64_t seed) {
  if (!(sigma >= 0.0))
    throw Error(ErrorCategory::kUsage, "InvalidSigma", "noise sigma must be >= 0");
  CuratedDataset out = curated;
  if (sigma == 0.0)
    return out;
  util::Rng rng(util::mix_seed(seed, 0x6e6f697365ULL));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.split.tags[i] != Split::kTrain)
      continue;
    for (double &v : out.concepts[i])
      v += sigma * rng.normal();
  }
  return out;
}

} // namespace glassmol::data
