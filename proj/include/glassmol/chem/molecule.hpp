//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace glassmol::chem {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Integer contribution of a non-aromatic bond to valence (aromatic -> 1).
int valence_contribution(BondOrder order) noexcept;
char bond_symbol(BondOrder order) noexcept;

struct Atom {
  std::string element; // canonical element symbol, e.g. "C", "Cl"
  int atomic_number = 0;
  int formal_charge = 0;
  std::optional<int> isotope;
  bool aromatic = false;
  std::optional<int> explicit_h; // set for every bracket atom
  int implicit_h = 0;
  int index = 0;

  int hydrogen_count() const noexcept {
    return implicit_h + explicit_h.value_or(0);
  }
  bool is_hydrogen() const noexcept { return atomic_number == 1; }
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const noexcept { return atom == a ? b : a; }
};

struct Neighbor {
  int atom;
  int bond;
};

// Parsed molecule. Atoms and bonds are immutable after construction; the
// adjacency lists and ring sets are derived and kept consistent with bonds.
class MolecularGraph {
public:
  MolecularGraph() = default;
  MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds,
                 std::string source_smiles = {});

  const std::vector<Atom> &atoms() const noexcept { return atoms_; }
  const std::vector<Bond> &bonds() const noexcept { return bonds_; }
  const Atom &atom(int i) const { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  const std::vector<Neighbor> &neighbors(int atom) const {
    return adjacency_[atom];
  }
  // Rings as sorted atom-index lists (smallest set of smallest rings).
  const std::vector<std::vector<int>> &rings() const noexcept {
    return rings_;
  }
  const std::string &source_smiles() const noexcept { return source_; }

  int num_atoms() const noexcept { return static_cast<int>(atoms_.size()); }
  int num_bonds() const noexcept { return static_cast<int>(bonds_.size()); }
  int degree(int atom) const { return static_cast<int>(adjacency_[atom].size()); }
  // Number of non-hydrogen neighbors.
  int heavy_degree(int atom) const;
  // Hydrogens: implicit + bracket count + explicit H-atom neighbors.
  int total_hydrogens(int atom) const;

  std::optional<int> bond_between(int a, int b) const;

  bool atom_in_ring(int atom) const { return atom_ring_count_[atom] > 0; }
  int atom_ring_count(int atom) const { return atom_ring_count_[atom]; }
  bool bond_in_ring(int bond) const { return bond_in_ring_[bond]; }
  // True when the atom lies in at least one SSSR ring of the given size.
  bool atom_in_ring_of_size(int atom, int size) const;

  int num_components() const;

  void set_rings(std::vector<std::vector<int>> rings);
  void set_implicit_hydrogens(int atom, int count) {
    atoms_[atom].implicit_h = count;
  }
  void set_bond_order(int bond, BondOrder order) { bonds_[bond].order = order; }

private:
  void rebuild_adjacency();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::vector<int>> rings_;
  std::vector<int> atom_ring_count_;
  std::vector<bool> bond_in_ring_;
  std::string source_;
};

} // namespace glassmol::chem
