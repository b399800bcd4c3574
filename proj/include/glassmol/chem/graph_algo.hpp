//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <limits>
#include <vector>

#include "glassmol/chem/molecule.hpp"

namespace glassmol::chem {

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

// Dense symmetric matrix of topological distances (bond counts).
class DistanceMatrix {
public:
  explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, kUnreachable) {}

  int size() const noexcept { return n_; }
  int operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  int &operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * n_ + j]; }

private:
  int n_;
  std::vector<int> d_;
};

// All-pairs BFS distances; kUnreachable across disconnected components.
DistanceMatrix shortest_path_matrix(const MolecularGraph &graph);

// Connected-component id per atom, numbered by first appearance.
std::vector<int> component_labels(const MolecularGraph &graph);

// Folds explicit hydrogen atoms into their heavy neighbor's hydrogen count.
// Hydrogens without a heavy neighbor ([H+], [H][H]) are kept as atoms.
MolecularGraph suppress_hydrogens(const MolecularGraph &graph);

// Inverse of suppress_hydrogens: every implicit or bracket hydrogen becomes
// an explicit H atom appended after the original atoms.
MolecularGraph add_explicit_hydrogens(const MolecularGraph &graph);

// Induced subgraph on `keep` (in ascending atom order); rings are carried
// over when all of their atoms survive.
MolecularGraph induced_subgraph(const MolecularGraph &graph,
                                const std::vector<bool> &keep);

} // namespace glassmol::chem
