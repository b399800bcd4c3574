//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "glassmol/chem/molecule.hpp"

namespace glassmol::chem {

// Smallest set of smallest rings as sorted atom-index lists.
//
// Minimum cycle basis via Horton's candidate set: every cycle formed by two
// BFS-tree paths from a root plus one closing edge. Candidates are sorted by
// (size, sorted atom list) and admitted greedily while independent over
// GF(2), so ties between equally small rings go to the lexicographically
// smallest atom list. The result has exactly bonds - atoms + components
// rings, ordered by (size, atom list).
std::vector<std::vector<int>> perceive_rings(const MolecularGraph &graph);

} // namespace glassmol::chem
