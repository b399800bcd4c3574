//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glassmol/chem/molecule.hpp"
#include "glassmol/error.hpp"

namespace glassmol::chem {

enum class SmilesErrorKind {
  kEmptyInput,
  kUnknownToken,
  kUnbalancedBranch,
  kUnmatchedRingClosure,
  kValenceExceeded,
  kInvalidBond,
};

std::string_view smiles_error_name(SmilesErrorKind kind) noexcept;

// Parse failure with the byte offset of the offending input.
class SmilesError : public Error {
public:
  SmilesError(SmilesErrorKind kind, std::size_t position,
              const std::string &detail);

  SmilesErrorKind error_kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

private:
  SmilesErrorKind kind_;
  std::size_t position_;
};

enum class TokenKind {
  kAtom,
  kBond,
  kRingClosure,
  kBranchOpen,
  kBranchClose,
  kDot,
};

struct AtomSpec {
  std::string element;
  int atomic_number = 0;
  bool aromatic = false;
  bool bracket = false;
  std::optional<int> isotope;
  int hydrogens = 0; // bracket atoms only
  int charge = 0;
};

struct Token {
  TokenKind kind;
  std::size_t position = 0;
  std::string text;
  AtomSpec atom;                         // kAtom
  BondOrder bond = BondOrder::kSingle;   // kBond
  int ring_number = 0;                   // kRingClosure
  bool discarded = false; // stereo markers: '/', '\' bonds, '@' chirality
};

// Lexes a SMILES string. Throws SmilesError(kUnknownToken) with the offset
// of the first character that does not start a valid token.
std::vector<Token> tokenize(std::string_view smiles);

// Builds a validated molecular graph: ring closures matched, branches
// balanced, implicit hydrogens assigned, rings perceived, stereo dropped.
MolecularGraph parse_smiles(std::string_view smiles);

} // namespace glassmol::chem
