//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glassmol/descriptors/pool.hpp"

namespace glassmol::desc {

struct CachedRecord {
  std::string smiles;
  int label = 0;
  ConceptVector raw; // full pool, pool order
};

// Key under which a cache is valid: the input file digest plus pool version.
struct CacheKey {
  std::string dataset_digest;
  std::string pool_version = std::string(kPoolVersion);

  bool operator==(const CacheKey &) const = default;
};

// CSV (smiles,label,<pool names...>) plus a "<path>.meta.json" sidecar.
void write_concept_cache(const std::filesystem::path &path,
                         const std::vector<CachedRecord> &records,
                         const CacheKey &key);

// The sidecar key, when present and readable.
std::optional<CacheKey> read_cache_key(const std::filesystem::path &path);

// Records when the sidecar matches `key`; nullopt when absent or stale.
std::optional<std::vector<CachedRecord>>
read_concept_cache(const std::filesystem::path &path, const CacheKey &key);

} // namespace glassmol::desc
