//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "glassmol/chem/molecule.hpp"
#include "glassmol/error.hpp"

namespace glassmol::desc {

// Small molecular pattern graphs with predicate atoms and bonds.
//
// Templates are written in a SMARTS-like notation restricted to what fixed
// fragment and atom-typing tables need:
//   atoms    C c N [#7] [NX3;H2,H1;+0] * a A, bracket primitives
//            #n  A a *  H<n>  X<n>  D<n>  R R<n>  r<n>  +/-<n>  element
//   logic    !  &  ,  ;   (usual precedence: ! > & > , > ;)
//   bonds    - = # : ~ @   (no symbol: single or aromatic), with ! & , ;
//   shape    branches (...) and ring-closure digits
// Recursive environments ($(...)) and disconnected queries are not
// supported.

class PatternError : public Error {
public:
  PatternError(std::string_view pattern, std::size_t position,
               const std::string &detail);
};

struct AtomExpr;
struct BondExpr;

struct PatternAtom {
  std::shared_ptr<const AtomExpr> expr;
  std::string text; // source text; equal texts mean equal predicates
};

struct PatternBond {
  int a;
  int b;
  std::shared_ptr<const BondExpr> expr;
  std::string text;
};

class FragmentPattern {
public:
  static FragmentPattern parse(std::string_view text);

  const std::string &text() const noexcept { return text_; }
  int num_atoms() const noexcept { return static_cast<int>(atoms_.size()); }
  const std::vector<PatternAtom> &atoms() const noexcept { return atoms_; }
  const std::vector<PatternBond> &bonds() const noexcept { return bonds_; }
  // Permutations of pattern atoms mapping the pattern onto itself.
  const std::vector<std::vector<int>> &automorphisms() const noexcept {
    return automorphisms_;
  }

private:
  std::string text_;
  std::vector<PatternAtom> atoms_;
  std::vector<PatternBond> bonds_;
  std::vector<std::vector<int>> automorphisms_;

  friend class PatternParser;
};

// An embedding: target atom index for each pattern atom.
using Embedding = std::vector<int>;

// All embeddings, one representative per automorphism class (the
// lexicographically smallest relabeling), in ascending order.
std::vector<Embedding> find_embeddings(const chem::MolecularGraph &graph,
                                       const FragmentPattern &pattern);

int count_matches(const chem::MolecularGraph &graph,
                  const FragmentPattern &pattern);

// True when some embedding maps pattern atom 0 onto `atom`.
bool matches_at(const chem::MolecularGraph &graph,
                const FragmentPattern &pattern, int atom);

} // namespace glassmol::desc
