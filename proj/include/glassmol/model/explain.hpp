//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "glassmol/model/glassmol_model.hpp"

namespace glassmol::model {

struct ContributionEntry {
  int rank = 0;            // 1-based, by |contribution| descending
  std::string name;
  double raw_value = 0.0;  // de-standardized, for reading only
  double standardized = 0.0;
  double weight = 0.0;
  double contribution = 0.0; // weight * standardized
};

// Exact additive decomposition of the logit over the concept layer:
// sum of contributions + bias == logit. A positive contribution pushes the
// prediction toward the positive label.
struct ContributionReport {
  std::string smiles;
  std::vector<ContributionEntry> entries;
  double bias = 0.0;
  double logit = 0.0;
  double probability = 0.5;

  // Tab-separated, fixed field order, stable formatting.
  std::string to_text() const;
};

// UnsupportedForBaseline for baseline models.
ContributionReport explain(const GlassMolModel &model, std::string_view smiles);
ContributionReport explain(const GlassMolModel &model, const Prediction &prediction,
                           std::string smiles);

// Atom-level view. For the top_n concepts by |contribution|, fragment-count
// concepts map to the atoms of every fragment match (indices into the
// hydrogen-suppressed graph, which equals SMILES atom order when no
// hydrogens are written as atoms). Other concepts are molecule-wide.
struct AtomHighlight {
  std::string name;
  double contribution = 0.0;
  std::vector<std::vector<int>> atom_sets;
};

struct AtomExplanation {
  std::vector<AtomHighlight> highlights; // fragment concepts with matches
  std::vector<std::string> global_concepts;
  std::vector<std::string> unmatched; // fragment concepts absent from the molecule

  std::string to_text() const;
};

AtomExplanation explain_atoms(const GlassMolModel &model, std::string_view smiles,
                              int top_n);

} // namespace glassmol::model
