//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/data/dataset.hpp"

#include "glassmol/chem/smiles.hpp"
#include "glassmol/error.hpp"
#include "glassmol/model/featurize.hpp"
#include "glassmol/util/csv.hpp"
#include "glassmol/util/digest.hpp"

namespace glassmol::data {

namespace {

std::optional<int> parse_label(const std::string &text) {
  if (text == "0" || text == "0.0")
    return 0;
  if (text == "1" || text == "1.0")
    return 1;
  return std::nullopt;
}

} // namespace

Dataset load_csv(const std::filesystem::path &path, std::string task_id) {
  const util::Table table = util::read_table(path);
  Dataset ds;
  ds.task_id = task_id.empty() ? path.stem().string() : std::move(task_id);
  ds.source = path;
  ds.digest = util::sha256_file(path);
  const auto smiles_col = table.column("smiles");
  const auto label_col = table.column("label");
  for (const auto &[name, col] : {std::pair{"smiles", smiles_col}, {"label", label_col}})
    if (!col)
      throw Error(ErrorCategory::kData, "MissingColumn",
                  path.string() + ": no '" + name + "' column");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto &row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    const std::string smiles = *smiles_col < row.size() ? row[*smiles_col] : "";
    const std::string label = *label_col < row.size() ? row[*label_col] : "";
    const auto y = parse_label(label);
    if (!y) {
      ds.quarantine.push_back({line, smiles, label, "label is not 0 or 1"});
      continue;
    }
    try {
      if (!model::has_heavy_atom(chem::parse_smiles(smiles))) {
        ds.quarantine.push_back({line, smiles, label, "no heavy atoms"});
        continue;
      }
    } catch (const Error &e) {
      ds.quarantine.push_back({line, smiles, label, e.kind() + ": " + e.what()});
      continue;
    }
    ds.records.push_back({smiles, *y, line});
  }
  if (ds.records.empty())
    throw Error(ErrorCategory::kData, "EmptyDataset",
                path.string() + ": no usable rows (" +
                    std::to_string(ds.quarantine.size()) + " quarantined)");
  return ds;
}

std::string quarantine_report(const Dataset &dataset) {
  std::string out = "line,smiles,label,reason\n";
  for (const auto &q : dataset.quarantine)
    out += util::join_fields({std::to_string(q.line), q.smiles, q.label, q.reason}) + "\n";
  return out;
}

} // namespace glassmol::data
