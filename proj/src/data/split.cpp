//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "glassmol/chem/scaffold.hpp"
#include "glassmol/chem/smiles.hpp"
#include "glassmol/error.hpp"
#include "glassmol/util/csv.hpp"
#include "glassmol/util/digest.hpp"

namespace glassmol::data {

std::string_view split_name(Split split) noexcept {
  switch (split) {
  case Split::kTrain:
    return "train";
  case Split::kValid:
    return "valid";
  case Split::kTest:
    return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  for (Split s : {Split::kTrain, Split::kValid, Split::kTest})
    if (split_name(s) == name)
      return s;
  throw Error(ErrorCategory::kUsage, "UnknownSplit", "split '" + std::string(name) + "'");
}

std::vector<std::size_t> SplitAssignment::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i] == split)
      out.push_back(i);
  return out;
}

std::size_t SplitAssignment::count(Split split) const {
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), split));
}

std::vector<std::string> scaffold_keys(const Dataset &dataset) {
  std::vector<std::string> keys;
  keys.reserve(dataset.size());
  for (const Record &r : dataset.records)
    keys.push_back(chem::murcko_scaffold(chem::parse_smiles(r.smiles)).canonical_key);
  return keys;
}

SplitAssignment scaffold_split(const Dataset &dataset, std::array<double, 3> fractions,
                               std::uint64_t seed) {
  for (double f : fractions)
    if (!(f >= 0.0))
      throw Error(ErrorCategory::kUsage, "InvalidFractions", "split fractions must be >= 0");
  if (std::fabs(fractions[0] + fractions[1] + fractions[2] - 1.0) > 1e-9)
    throw Error(ErrorCategory::kUsage, "InvalidFractions", "split fractions must sum to 1");

  SplitAssignment out;
  out.seed = seed;
  out.scaffold_keys = scaffold_keys(dataset);
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    groups[out.scaffold_keys[i]].push_back(i);
  if (groups.size() < 3)
    throw Error(ErrorCategory::kData, "TooFewScaffolds",
                std::to_string(groups.size()) + " scaffold group(s); at least 3 needed");

  std::vector<const std::pair<const std::string, std::vector<std::size_t>> *> order;
  for (const auto &g : groups)
    order.push_back(&g);
  // std::map iteration is already key-ascending; a stable sort on size keeps it.
  std::stable_sort(order.begin(), order.end(), [](const auto *a, const auto *b) {
    return a->second.size() > b->second.size();
  });

  const double n = static_cast<double>(dataset.size());
  const double train_target = fractions[0] * n;
  const double valid_target = (fractions[0] + fractions[1]) * n;
  out.tags.assign(dataset.size(), Split::kTest);
  std::size_t train = 0, valid = 0;
  for (const auto *g : order) {
    Split tag = Split::kTest;
    if (static_cast<double>(train) < train_target - 1e-9)
      tag = Split::kTrain;
    else if (static_cast<double>(train + valid) < valid_target - 1e-9)
      tag = Split::kValid;
    for (std::size_t i : g->second)
      out.tags[i] = tag;
    if (tag == Split::kTrain)
      train += g->second.size();
    else if (tag == Split::kValid)
      valid += g->second.size();
  }
  return out;
}

std::string smiles_digest(std::string_view smiles) {
  return util::sha256_hex(smiles).substr(0, 16);
}

void write_split(const std::filesystem::path &path, const Dataset &dataset,
                 const SplitAssignment &split) {
  std::string out = "smiles_digest,split,seed\n";
  for (std::size_t i = 0; i < dataset.size(); ++i)
    out += smiles_digest(dataset.records[i].smiles) + "," +
           std::string(split_name(split.tags[i])) + "," + std::to_string(split.seed) + "\n";
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  util::write_file_atomic(path, out);
}

SplitAssignment read_split(const std::filesystem::path &path, const Dataset &dataset) {
  const util::Table table = util::read_table(path);
  const auto d = table.column("smiles_digest"), s = table.column("split"),
             seed = table.column("seed");
  if (!d || !s || !seed)
    throw Error(ErrorCategory::kData, "MissingColumn",
                path.string() + ": expected smiles_digest,split,seed");
  std::map<std::string, Split> by_digest;
  SplitAssignment out;
  for (const auto &row : table.rows) {
    by_digest[row.at(*d)] = parse_split(row.at(*s));
    out.seed = std::stoull(row.at(*seed));
  }
  out.scaffold_keys = scaffold_keys(dataset);
  for (const Record &r : dataset.records) {
    const auto it = by_digest.find(smiles_digest(r.smiles));
    if (it == by_digest.end())
      throw Error(ErrorCategory::kData, "SplitMismatch",
                  path.string() + ": no entry for '" + r.smiles + "'");
    out.tags.push_back(it->second);
  }
  return out;
}

} // namespace glassmol::data
