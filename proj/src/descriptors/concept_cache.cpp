//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/descriptors/concept_cache.hpp"

#include <json.hpp>

#include "glassmol/util/csv.hpp"
#include "glassmol/util/digest.hpp"

namespace glassmol::desc {

namespace fs = std::filesystem;

namespace {

fs::path meta_path(const fs::path &path) {
  fs::path meta = path;
  meta += ".meta.json";
  return meta;
}

} // namespace

void write_concept_cache(const fs::path &path,
                         const std::vector<CachedRecord> &records,
                         const CacheKey &key) {
  std::vector<std::string> header{"smiles", "label"};
  const auto names = pool_names();
  header.insert(header.end(), names.begin(), names.end());
  std::string out = util::join_fields(header) + "\n";
  for (const CachedRecord &r : records) {
    if (r.raw.names != names)
      throw_shape_mismatch("cache row", std::to_string(r.raw.names.size()),
                           std::to_string(names.size()));
    std::vector<std::string> row{r.smiles, std::to_string(r.label)};
    for (double v : r.raw.values)
      row.push_back(util::format_double(v));
    out += util::join_fields(row) + "\n";
  }
  util::write_file_atomic(path, out);

  nlohmann::json meta = {{"dataset_digest", key.dataset_digest},
                         {"pool_version", key.pool_version},
                         {"rows", records.size()},
                         {"content_digest", util::sha256_hex(out)}};
  util::write_file_atomic(meta_path(path), meta.dump(2) + "\n");
}

std::optional<CacheKey> read_cache_key(const fs::path &path) {
  const fs::path meta = meta_path(path);
  if (!fs::exists(meta) || !fs::exists(path))
    return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(util::read_file(meta));
    if (j.value("content_digest", "") != util::sha256_file(path))
      return std::nullopt;
    return CacheKey{j.at("dataset_digest").get<std::string>(),
                    j.at("pool_version").get<std::string>()};
  } catch (const std::exception &) {
    return std::nullopt;
  }
}

std::optional<std::vector<CachedRecord>>
read_concept_cache(const fs::path &path, const CacheKey &key) {
  const auto stored = read_cache_key(path);
  if (!stored || !(*stored == key))
    return std::nullopt;
  const util::Table t = util::read_table(path);
  const auto names = pool_names();
  if (t.header.size() != names.size() + 2 || t.header[0] != "smiles" ||
      t.header[1] != "label" ||
      !std::equal(names.begin(), names.end(), t.header.begin() + 2))
    return std::nullopt;
  std::vector<CachedRecord> out;
  for (const auto &row : t.rows) {
    if (row.size() != t.header.size())
      throw Error(ErrorCategory::kData, "CorruptCache",
                  path.string() + ": ragged row");
    CachedRecord r{row[0], static_cast<int>(util::parse_double(row[1])),
                   ConceptVector{{}, names, false, nullptr}};
    for (std::size_t j = 2; j < row.size(); ++j)
      r.raw.values.push_back(util::parse_double(row[j]));
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace glassmol::desc
