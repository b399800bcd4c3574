//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "glassmol/chem/molecule.hpp"
#include "glassmol/nn/layers.hpp"

namespace glassmol::model {

// Node layout: element one-hot (C N O F P S Cl Br I B Si Se, other) 13,
// heavy degree one-hot 0..5+ 6, formal charge 1, aromatic flag 1,
// hydrogen count one-hot 0..3+ 4.
inline constexpr int kNodeFeatures = 25;
// Edge layout: bond order one-hot (single, double, triple, aromatic).
inline constexpr int kEdgeFeatures = 4;

struct GraphInput {
  nn::Tensor nodes;          // [n x kNodeFeatures]
  nn::EdgeIndex edges;       // both directions per bond
  nn::Tensor edge_features;  // [edges x kEdgeFeatures]
  int num_nodes() const { return nodes.rows(); }
};

// Featurized molecule for either backbone.
struct MoleculeInput {
  std::string smiles;
  GraphInput graph;
};

bool has_heavy_atom(const chem::MolecularGraph &graph);

// Works on the hydrogen-suppressed graph. Throws FeaturizationError for a
// molecule with no heavy atoms.
GraphInput featurize_graph(const chem::MolecularGraph &graph);

// Parses (SmilesError on bad input) and featurizes.
MoleculeInput featurize(std::string_view smiles);

// Disjoint union of several molecules: node rows stacked, edge endpoints
// shifted by each graph's node offset, `membership` maps node -> molecule.
struct Batch {
  nn::Tensor nodes;
  nn::EdgeIndex edges;
  nn::Tensor edge_features;
  std::vector<int> membership;
  nn::TokenBatch tokens;
  int size = 0;
};

Batch collate(const std::vector<const MoleculeInput *> &molecules);

} // namespace glassmol::model
