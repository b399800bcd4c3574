//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace glassmol::data {

struct Record {
  std::string smiles;
  int label = 0;
  std::size_t line = 0; // 1-based line in the source file
};

struct QuarantinedRow {
  std::size_t line = 0;
  std::string smiles;
  std::string label;
  std::string reason;
};

struct Dataset {
  std::string task_id;
  std::filesystem::path source;
  std::string digest; // SHA-256 of the source file
  std::vector<Record> records;
  std::vector<QuarantinedRow> quarantine;

  std::size_t size() const noexcept { return records.size(); }
};

// Reads a CSV with `smiles` and `label` columns (others ignored). Rows with
// an unparseable SMILES, no heavy atoms or a label other than 0/1 are
// quarantined. Throws MissingColumn, or EmptyDataset when no row survives.
Dataset load_csv(const std::filesystem::path &path, std::string task_id = "");

// CSV (line,smiles,label,reason) of the quarantined rows.
std::string quarantine_report(const Dataset &dataset);

} // namespace glassmol::data
