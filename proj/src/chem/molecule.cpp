//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/chem/molecule.hpp"

#include <algorithm>
#include <numeric>

namespace glassmol::chem {

int valence_contribution(BondOrder order) noexcept {
  switch (order) {
  case BondOrder::kDouble:
    return 2;
  case BondOrder::kTriple:
    return 3;
  case BondOrder::kSingle:
  case BondOrder::kAromatic:
    break;
  }
  return 1;
}

char bond_symbol(BondOrder order) noexcept {
  switch (order) {
  case BondOrder::kSingle:
    return '-';
  case BondOrder::kDouble:
    return '=';
  case BondOrder::kTriple:
    return '#';
  case BondOrder::kAromatic:
    break;
  }
  return ':';
}

MolecularGraph::MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds,
                               std::string source_smiles)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)),
      source_(std::move(source_smiles)) {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    atoms_[i].index = static_cast<int>(i);
  rebuild_adjacency();
  set_rings({});
}

void MolecularGraph::rebuild_adjacency() {
  adjacency_.assign(atoms_.size(), {});
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    const Bond &b = bonds_[i];
    adjacency_[b.a].push_back({b.b, static_cast<int>(i)});
    adjacency_[b.b].push_back({b.a, static_cast<int>(i)});
  }
}

int MolecularGraph::heavy_degree(int atom) const {
  return static_cast<int>(std::count_if(
      adjacency_[atom].begin(), adjacency_[atom].end(),
      [&](const Neighbor &n) { return !atoms_[n.atom].is_hydrogen(); }));
}

int MolecularGraph::total_hydrogens(int atom) const {
  return atoms_[atom].hydrogen_count() + degree(atom) - heavy_degree(atom);
}

std::optional<int> MolecularGraph::bond_between(int a, int b) const {
  for (const Neighbor &n : adjacency_[a]) {
    if (n.atom == b)
      return n.bond;
  }
  return std::nullopt;
}

bool MolecularGraph::atom_in_ring_of_size(int atom, int size) const {
  return std::any_of(rings_.begin(), rings_.end(), [&](const auto &ring) {
    return static_cast<int>(ring.size()) == size &&
           std::binary_search(ring.begin(), ring.end(), atom);
  });
}

int MolecularGraph::num_components() const {
  std::vector<int> parent(atoms_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = num_atoms();
  for (const Bond &b : bonds_) {
    const int ra = find(b.a), rb = find(b.b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

void MolecularGraph::set_rings(std::vector<std::vector<int>> rings) {
  rings_ = std::move(rings);
  atom_ring_count_.assign(atoms_.size(), 0);
  bond_in_ring_.assign(bonds_.size(), false);
  for (auto &ring : rings_) {
    std::sort(ring.begin(), ring.end());
    for (int a : ring)
      ++atom_ring_count_[a];
  }
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    const Bond &b = bonds_[i];
    bond_in_ring_[i] = std::any_of(
        rings_.begin(), rings_.end(), [&](const std::vector<int> &ring) {
          return std::binary_search(ring.begin(), ring.end(), b.a) &&
                 std::binary_search(ring.begin(), ring.end(), b.b);
        });
  }
}

} // namespace glassmol::chem
