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

#include "glassmol/descriptors/pool.hpp"

namespace glassmol::concepts {

struct TaskDescription {
  std::string task_id;
  std::string text;
  std::string positive_label_meaning;
};

enum class SelectionMethod { kLlm, kStatic, kRandom, kLasso, kFull };

std::string_view method_name(SelectionMethod method) noexcept;
SelectionMethod parse_method(std::string_view name); // Error(kUsage) if unknown

// K descriptor names picked for one task, in ranked order, plus where they
// came from. Provenance is free-form key/value text so every selector can
// record what it needs (seed, lambda, endpoint, response digest, ...).
struct ConceptSelection {
  std::string task_id;
  SelectionMethod method = SelectionMethod::kStatic;
  int k = 0;
  std::vector<std::string> names;
  std::string pool_version = std::string(desc::kPoolVersion);
  std::map<std::string, std::string> provenance;

  bool operator==(const ConceptSelection &) const = default;

  // Throws Error(kData, "InvalidSelection") when names leave the pool,
  // repeat, or disagree with k; PoolVersionMismatch when the file predates
  // the current pool.
  void validate() const;

  // SHA-256 over task, method and names; stamped into checkpoints.
  std::string digest() const;
};

void write_selection(const std::filesystem::path &path,
                     const ConceptSelection &selection);

// Parses and validates. Error(kData, "MalformedSelection") on bad syntax.
ConceptSelection read_selection(const std::filesystem::path &path);

// In-memory forms of the same JSON document; `origin` labels errors.
std::string serialize_selection(const ConceptSelection &selection);
ConceptSelection parse_selection(std::string_view text, const std::string &origin);

// Bundled registry of offline selections (data/selections).
std::filesystem::path default_registry();

// Registry lookup: "<task_id>.json", or "<task_id>.k<k>.json" when k is
// given and differs from the default file's k. Throws MissingSelection.
ConceptSelection select_static(std::string_view task_id,
                               const std::filesystem::path &registry,
                               std::optional<int> k = std::nullopt);

// Every pool name in pool order.
ConceptSelection select_full(std::string_view task_id);

// Uniform sample without replacement, returned in pool order.
ConceptSelection select_random(std::string_view task_id,
                               const std::vector<std::string> &pool_names,
                               int k, std::uint64_t seed);

// Registered task descriptions (data/tasks/descriptions.tsv).
std::optional<TaskDescription> find_task(std::string_view task_id);
std::vector<TaskDescription> task_registry();

// UTC "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

} // namespace glassmol::concepts
