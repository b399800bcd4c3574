//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>

#include "glassmol/chem/molecule.hpp"

namespace glassmol::chem {

// Key shared by every acyclic molecule (empty scaffold).
inline constexpr std::string_view kEmptyScaffoldKey = "scaffold:empty";

struct Scaffold {
  MolecularGraph graph;
  std::string canonical_key;

  bool empty() const noexcept { return graph.num_atoms() == 0; }
};

// Permutation-invariant graph key. Atom invariants (element, charge, degree,
// aromaticity, sorted incident bond orders) are refined over neighborhoods
// until the number of classes stops growing; the key hashes the sorted
// multiset of final classes. Empty graphs map to kEmptyScaffoldKey.
std::string canonical_key(const MolecularGraph &graph);

// Bemis-Murcko scaffold: ring systems plus linkers. Degree-1 non-ring atoms
// are pruned repeatedly; an atom double-bonded to a ring atom is retained.
Scaffold murcko_scaffold(const MolecularGraph &graph);

} // namespace glassmol::chem
