//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// Independent reference computations shared by the unit and acceptance
// suites. Nothing here calls the code path it checks.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "glassmol/chem/smiles.hpp"
#include "glassmol/descriptors/pool.hpp"
#include "glassmol/util/csv.hpp"

namespace glassmol::testing {

struct ReferenceMolecule {
  std::string name;
  std::string smiles;
  std::map<std::string, double> values;
};

// The frozen external-toolkit fixture (data/reference).
inline std::vector<ReferenceMolecule> load_descriptor_reference() {
  const util::Table t = util::read_table(
      desc::data_directory() / "reference" / "descriptor_reference.csv", ',',
      true);
  std::vector<ReferenceMolecule> out;
  for (const auto &row : t.rows) {
    ReferenceMolecule m{row.at(0), row.at(1), {}};
    for (std::size_t j = 2; j < t.header.size(); ++j)
      m.values[t.header[j]] = util::parse_double(row.at(j));
    out.push_back(std::move(m));
  }
  return out;
}

// Per-descriptor tolerance: reals get the pinned slack, everything else is
// an integer count compared exactly.
inline double reference_tolerance(const std::string &name) {
  if (name == "molecular_weight")
    return 0.02;
  if (name == "tpsa")
    return 0.5;
  if (name == "crippen_logp")
    return 0.3;
  return 0.0;
}

struct OracleMismatch {
  std::string molecule;
  std::string descriptor;
  double expected;
  double actual;
};

inline std::vector<OracleMismatch>
compare_with_reference(const std::vector<ReferenceMolecule> &reference,
                       int *checked = nullptr) {
  std::vector<OracleMismatch> bad;
  int n = 0;
  for (const ReferenceMolecule &m : reference) {
    const desc::ConceptVector v =
        desc::compute_pool(chem::parse_smiles(m.smiles));
    for (const auto &[name, expected] : m.values) {
      const auto idx = desc::pool_index(name);
      if (!idx)
        continue;
      const double actual = v.values[*idx];
      ++n;
      if (std::abs(actual - expected) > reference_tolerance(name) + 1e-9)
        bad.push_back({m.name, name, expected, actual});
    }
  }
  if (checked)
    *checked = n;
  return bad;
}

// Wiener index of the path graph P_n.
inline long long wiener_path_closed_form(int n) {
  return static_cast<long long>(n) * (static_cast<long long>(n) * n - 1) / 6;
}

// Carbon chain SMILES with n atoms.
inline std::string path_smiles(int n) { return std::string(n, 'C'); }

namespace oracle {

// Probability that a random positive outranks a random negative, ties
// counting one half, by enumerating every positive/negative pair.
inline double pair_count_auroc(const std::vector<double> &scores,
                               const std::vector<int> &labels) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i])
      continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j])
        continue;
      pairs += 1.0;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / pairs;
}

} // namespace oracle

} // namespace glassmol::testing
