//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "glassmol/data/dataset.hpp"

namespace glassmol::data {

enum class Split { kTrain, kValid, kTest };

std::string_view split_name(Split split) noexcept;
Split parse_split(std::string_view name); // UnknownSplit (usage)

struct SplitAssignment {
  std::vector<Split> tags;                // one per record
  std::vector<std::string> scaffold_keys; // one per record
  std::uint64_t seed = 0;
  std::string method = "scaffold";

  std::vector<std::size_t> indices(Split split) const;
  std::size_t count(Split split) const;
};

// Bemis-Murcko scaffold split. Records are grouped by scaffold key (all
// acyclic molecules share one group), groups are ordered by size descending
// then key ascending, and each group goes to train until train holds at
// least fractions[0] of the records, then to valid until train + valid hold
// fractions[0] + fractions[1], then to test. Nothing here is random: the
// seed is recorded only, so the split depends on content alone.
// Throws TooFewScaffolds (< 3 groups) and InvalidFractions.
SplitAssignment scaffold_split(const Dataset &dataset,
                               std::array<double, 3> fractions = {0.8, 0.1, 0.1},
                               std::uint64_t seed = 0);

// Per-record scaffold keys (exposed for tests and reports).
std::vector<std::string> scaffold_keys(const Dataset &dataset);

// Split file: CSV of smiles_digest,split,seed, one row per record.
void write_split(const std::filesystem::path &path, const Dataset &dataset,
                 const SplitAssignment &split);
// SplitMismatch when a record's digest is absent from the file.
SplitAssignment read_split(const std::filesystem::path &path, const Dataset &dataset);

std::string smiles_digest(std::string_view smiles);

} // namespace glassmol::data
