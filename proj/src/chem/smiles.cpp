//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/chem/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

#include "glassmol/chem/elements.hpp"
#include "glassmol/chem/rings.hpp"

namespace glassmol::chem {

std::string_view smiles_error_name(SmilesErrorKind kind) noexcept {
  switch (kind) {
  case SmilesErrorKind::kEmptyInput:
    return "EmptyInput";
  case SmilesErrorKind::kUnknownToken:
    return "UnknownToken";
  case SmilesErrorKind::kUnbalancedBranch:
    return "UnbalancedBranch";
  case SmilesErrorKind::kUnmatchedRingClosure:
    return "UnmatchedRingClosure";
  case SmilesErrorKind::kValenceExceeded:
    return "ValenceExceeded";
  case SmilesErrorKind::kInvalidBond:
    return "InvalidBond";
  }
  return "SmilesError";
}

SmilesError::SmilesError(SmilesErrorKind kind, std::size_t position,
                         const std::string &detail)
    : Error(ErrorCategory::kData, std::string(smiles_error_name(kind)),
            detail + " at offset " + std::to_string(position)),
      kind_(kind), position_(position) {}

namespace {

[[noreturn]] void fail(SmilesErrorKind kind, std::size_t pos,
                       const std::string &detail) {
  throw SmilesError(kind, pos, detail);
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

AtomSpec make_spec(std::string_view symbol, bool aromatic, bool bracket) {
  AtomSpec spec;
  std::string canonical(symbol);
  if (aromatic)
    canonical[0] = static_cast<char>(std::toupper(canonical[0]));
  const ElementInfo *info = find_element(canonical);
  spec.element = canonical;
  spec.atomic_number = info != nullptr ? info->atomic_number : 0;
  spec.aromatic = aromatic;
  spec.bracket = bracket;
  return spec;
}

class Lexer {
public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < s_.size())
      out.push_back(next());
    return out;
  }

private:
  char peek(std::size_t off = 0) const {
    return pos_ + off < s_.size() ? s_[pos_ + off] : '\0';
  }

  [[noreturn]] void unknown(std::size_t at, const std::string &what) const {
    fail(SmilesErrorKind::kUnknownToken, at, what);
  }

  Token next() {
    Token tok;
    tok.position = pos_;
    const char c = s_[pos_];
    switch (c) {
    case '(':
      tok.kind = TokenKind::kBranchOpen;
      ++pos_;
      break;
    case ')':
      tok.kind = TokenKind::kBranchClose;
      ++pos_;
      break;
    case '.':
      tok.kind = TokenKind::kDot;
      ++pos_;
      break;
    case '-':
    case '=':
    case '#':
    case ':':
    case '/':
    case '\\':
      tok.kind = TokenKind::kBond;
      tok.bond = c == '=' ? BondOrder::kDouble
                 : c == '#' ? BondOrder::kTriple
                 : c == ':' ? BondOrder::kAromatic
                            : BondOrder::kSingle;
      tok.discarded = c == '/' || c == '\\';
      ++pos_;
      break;
    case '%': {
      if (!is_digit(peek(1)) || !is_digit(peek(2)))
        unknown(pos_, "'%' must be followed by two digits");
      tok.kind = TokenKind::kRingClosure;
      tok.ring_number = (peek(1) - '0') * 10 + (peek(2) - '0');
      pos_ += 3;
      break;
    }
    case '[':
      lex_bracket(tok);
      break;
    default:
      if (is_digit(c)) {
        tok.kind = TokenKind::kRingClosure;
        tok.ring_number = c - '0';
        ++pos_;
      } else {
        lex_organic(tok);
      }
    }
    tok.text = std::string(s_.substr(tok.position, pos_ - tok.position));
    return tok;
  }

  void lex_organic(Token &tok) {
    tok.kind = TokenKind::kAtom;
    const char c = s_[pos_];
    if (c == 'C' && peek(1) == 'l') {
      tok.atom = make_spec("Cl", false, false);
      pos_ += 2;
      return;
    }
    if (c == 'B' && peek(1) == 'r') {
      tok.atom = make_spec("Br", false, false);
      pos_ += 2;
      return;
    }
    static constexpr std::string_view kAliphatic = "BCNOPSFI";
    static constexpr std::string_view kAromatic = "bcnops";
    if (kAliphatic.find(c) != std::string_view::npos) {
      tok.atom = make_spec(std::string_view(&s_[pos_], 1), false, false);
    } else if (kAromatic.find(c) != std::string_view::npos) {
      tok.atom = make_spec(std::string_view(&s_[pos_], 1), true, false);
    } else {
      unknown(pos_, std::string("unexpected character '") + c + "'");
    }
    ++pos_;
  }

  int read_int() {
    int v = 0;
    while (is_digit(peek())) {
      v = v * 10 + (peek() - '0');
      if (v > 100000)
        unknown(pos_, "number too large");
      ++pos_;
    }
    return v;
  }

  void lex_bracket(Token &tok) {
    const std::size_t open = pos_;
    tok.kind = TokenKind::kAtom;
    ++pos_;
    std::optional<int> isotope;
    if (is_digit(peek()))
      isotope = read_int();

    // Element symbol: two-letter elements win over one-letter ones.
    const std::size_t sym_at = pos_;
    std::string_view symbol;
    bool aromatic = false;
    if (is_upper(peek())) {
      if (is_lower(peek(1)) &&
          find_element(s_.substr(pos_, 2)) != nullptr) {
        symbol = s_.substr(pos_, 2);
      } else if (find_element(s_.substr(pos_, 1)) != nullptr) {
        symbol = s_.substr(pos_, 1);
      }
    } else if (is_lower(peek())) {
      for (std::string_view cand : {"se", "as", "te"}) {
        if (s_.substr(pos_, 2) == cand) {
          symbol = cand;
          break;
        }
      }
      if (symbol.empty() &&
          std::string_view("bcnops").find(peek()) != std::string_view::npos)
        symbol = s_.substr(pos_, 1);
      aromatic = !symbol.empty();
    }
    if (symbol.empty())
      unknown(sym_at, "unknown element in bracket atom");
    pos_ += symbol.size();
    tok.atom = make_spec(symbol, aromatic, true);
    tok.atom.isotope = isotope;

    if (peek() == '@') {
      tok.discarded = true;
      ++pos_;
      if (peek() == '@') {
        ++pos_;
      } else {
        for (std::string_view cls : {"TH", "AL", "SP", "TB", "OH"}) {
          if (s_.substr(pos_, 2) == cls && is_digit(peek(2))) {
            pos_ += 2;
            read_int();
            break;
          }
        }
      }
    }
    if (peek() == 'H') {
      ++pos_;
      tok.atom.hydrogens = is_digit(peek()) ? read_int() : 1;
    }
    if (peek() == '+' || peek() == '-') {
      const char sign = peek();
      const int unit = sign == '+' ? 1 : -1;
      ++pos_;
      if (is_digit(peek())) {
        tok.atom.charge = unit * read_int();
      } else {
        int n = 1;
        while (peek() == sign) {
          ++n;
          ++pos_;
        }
        tok.atom.charge = unit * n;
      }
    }
    if (peek() == ':') {
      ++pos_;
      if (!is_digit(peek()))
        unknown(pos_, "atom class must be numeric");
      read_int();
    }
    if (peek() != ']') {
      if (pos_ >= s_.size())
        unknown(open, "unterminated bracket atom");
      unknown(pos_, std::string("unexpected character '") + peek() +
                        "' in bracket atom");
    }
    ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

struct PendingBond {
  std::optional<BondOrder> order; // unset for directional '/' and '\'
  bool explicit_symbol;
  std::size_t position;
};

struct OpenRing {
  int atom;
  std::optional<BondOrder> order;
  std::size_t position;
};

struct RawBond {
  Bond bond;
  bool implicit_symbol;
  std::size_t position;
};

// Allowed valences for uncharged organic-subset atoms, ascending.
std::vector<int> organic_valences(int z) {
  switch (z) {
  case 5:
    return {3};
  case 6:
    return {4};
  case 7:
    return {3};
  case 8:
    return {2};
  case 15:
    return {3, 5};
  case 16:
    return {2, 4, 6};
  case 9:
  case 17:
  case 35:
  case 53:
    return {1};
  default:
    return {};
  }
}

// Maximum valence for bracket atoms of strictly-checked elements; -1 when
// the element is not checked.
int bracket_max_valence(int z, int charge) {
  switch (z) {
  case 5:
    return 3 - charge;
  case 6:
    return 4 - std::abs(charge);
  case 7:
    return 3 + charge;
  case 8:
    return 2 + charge;
  case 9:
    return 1 + charge;
  default:
    return -1;
  }
}

} // namespace

std::vector<Token> tokenize(std::string_view smiles) {
  if (smiles.empty())
    fail(SmilesErrorKind::kEmptyInput, 0, "empty SMILES");
  return Lexer(smiles).run();
}

MolecularGraph parse_smiles(std::string_view smiles) {
  const std::vector<Token> tokens = tokenize(smiles);

  std::vector<Atom> atoms;
  std::vector<std::size_t> atom_pos;
  std::vector<RawBond> raw;
  std::map<int, OpenRing> open_rings;
  std::vector<std::pair<int, std::size_t>> branch_stack; // prev atom, '(' pos
  std::optional<PendingBond> pending;
  int prev = -1;
  bool atom_since_branch = true;

  auto existing_bond = [&](int a, int b) {
    return std::any_of(raw.begin(), raw.end(), [&](const RawBond &r) {
      return (r.bond.a == a && r.bond.b == b) ||
             (r.bond.a == b && r.bond.b == a);
    });
  };
  auto add_bond = [&](int a, int b, std::optional<BondOrder> order,
                      std::size_t pos) {
    if (a == b)
      fail(SmilesErrorKind::kInvalidBond, pos, "atom bonded to itself");
    if (existing_bond(a, b))
      fail(SmilesErrorKind::kInvalidBond, pos, "duplicate bond");
    const bool both_aromatic = atoms[a].aromatic && atoms[b].aromatic;
    RawBond r;
    r.bond.a = a;
    r.bond.b = b;
    r.implicit_symbol = !order.has_value();
    r.position = pos;
    if (order) {
      if (*order == BondOrder::kAromatic && !both_aromatic)
        fail(SmilesErrorKind::kInvalidBond, pos,
             "aromatic bond between non-aromatic atoms");
      r.bond.order = *order;
    } else {
      r.bond.order = both_aromatic ? BondOrder::kAromatic : BondOrder::kSingle;
    }
    raw.push_back(r);
  };

  for (const Token &tok : tokens) {
    switch (tok.kind) {
    case TokenKind::kAtom: {
      Atom atom;
      atom.element = tok.atom.element;
      atom.atomic_number = tok.atom.atomic_number;
      atom.aromatic = tok.atom.aromatic;
      atom.formal_charge = tok.atom.charge;
      atom.isotope = tok.atom.isotope;
      if (tok.atom.bracket)
        atom.explicit_h = tok.atom.hydrogens;
      atom.index = static_cast<int>(atoms.size());
      atoms.push_back(atom);
      atom_pos.push_back(tok.position);
      const int cur = atom.index;
      if (prev >= 0) {
        add_bond(prev, cur, pending ? pending->order : std::nullopt,
                 pending ? pending->position : tok.position);
      } else if (pending) {
        fail(SmilesErrorKind::kInvalidBond, pending->position,
             "bond without a preceding atom");
      }
      pending.reset();
      prev = cur;
      atom_since_branch = true;
      break;
    }
    case TokenKind::kBond:
      if (pending)
        fail(SmilesErrorKind::kInvalidBond, tok.position,
             "two consecutive bond symbols");
      if (prev < 0)
        fail(SmilesErrorKind::kInvalidBond, tok.position,
             "bond without a preceding atom");
      pending = PendingBond{tok.discarded ? std::nullopt
                                          : std::optional<BondOrder>(tok.bond),
                            true, tok.position};
      break;
    case TokenKind::kRingClosure: {
      if (prev < 0)
        fail(SmilesErrorKind::kUnmatchedRingClosure, tok.position,
             "ring closure without a preceding atom");
      auto it = open_rings.find(tok.ring_number);
      if (it == open_rings.end()) {
        OpenRing ring{prev, std::nullopt, tok.position};
        if (pending)
          ring.order = pending->order;
        open_rings.emplace(tok.ring_number, ring);
      } else {
        std::optional<BondOrder> order = it->second.order;
        if (pending && pending->order) {
          if (order && *order != *pending->order)
            fail(SmilesErrorKind::kInvalidBond, tok.position,
                 "conflicting ring-closure bond orders");
          order = pending->order;
        }
        add_bond(it->second.atom, prev, order, tok.position);
        open_rings.erase(it);
      }
      pending.reset();
      break;
    }
    case TokenKind::kBranchOpen:
      if (prev < 0)
        fail(SmilesErrorKind::kUnbalancedBranch, tok.position,
             "branch without a preceding atom");
      if (pending)
        fail(SmilesErrorKind::kInvalidBond, pending->position,
             "bond symbol before branch");
      branch_stack.emplace_back(prev, tok.position);
      atom_since_branch = false;
      break;
    case TokenKind::kBranchClose:
      if (branch_stack.empty())
        fail(SmilesErrorKind::kUnbalancedBranch, tok.position,
             "unmatched ')'");
      if (pending)
        fail(SmilesErrorKind::kInvalidBond, pending->position,
             "dangling bond at branch end");
      if (!atom_since_branch)
        fail(SmilesErrorKind::kUnbalancedBranch, tok.position,
             "empty branch");
      prev = branch_stack.back().first;
      branch_stack.pop_back();
      break;
    case TokenKind::kDot:
      if (pending)
        fail(SmilesErrorKind::kInvalidBond, pending->position,
             "dangling bond before '.'");
      if (prev < 0)
        fail(SmilesErrorKind::kInvalidBond, tok.position,
             "'.' without a preceding atom");
      prev = -1;
      break;
    }
  }
  if (pending)
    fail(SmilesErrorKind::kInvalidBond, pending->position, "dangling bond");
  if (!branch_stack.empty())
    fail(SmilesErrorKind::kUnbalancedBranch, branch_stack.back().second,
         "unclosed '('");
  if (!open_rings.empty())
    fail(SmilesErrorKind::kUnmatchedRingClosure,
         open_rings.begin()->second.position, "unclosed ring bond");
  if (atoms.empty())
    fail(SmilesErrorKind::kEmptyInput, 0, "no atoms");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].atomic_number == 0)
      fail(SmilesErrorKind::kUnknownToken, atom_pos[i], "unknown element");
  }

  std::vector<Bond> bonds;
  bonds.reserve(raw.size());
  for (const RawBond &r : raw)
    bonds.push_back(r.bond);
  MolecularGraph graph(std::move(atoms), std::move(bonds),
                       std::string(smiles));
  graph.set_rings(perceive_rings(graph));

  // An implicit bond between aromatic atoms of different rings (biaryls)
  // is a single bond.
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].implicit_symbol && raw[i].bond.order == BondOrder::kAromatic &&
        !graph.bond_in_ring(static_cast<int>(i)))
      graph.set_bond_order(static_cast<int>(i), BondOrder::kSingle);
  }

  for (int i = 0; i < graph.num_atoms(); ++i) {
    const Atom &atom = graph.atom(i);
    int valence = 0;
    for (const Neighbor &nb : graph.neighbors(i))
      valence += valence_contribution(graph.bond(nb.bond).order);

    if (atom.explicit_h.has_value()) {
      const int max_v = bracket_max_valence(atom.atomic_number,
                                            atom.formal_charge);
      if (max_v >= 0 && valence + *atom.explicit_h > max_v)
        fail(SmilesErrorKind::kValenceExceeded, atom_pos[i],
             "valence of " + atom.element + " exceeded");
      continue;
    }
    const std::vector<int> allowed = organic_valences(atom.atomic_number);
    if (allowed.empty() || valence > allowed.back())
      fail(SmilesErrorKind::kValenceExceeded, atom_pos[i],
           "valence of " + atom.element + " exceeded");
    int hydrogens = 0;
    if (atom.aromatic) {
      // One valence unit is taken by the aromatic system.
      hydrogens = std::max(0, allowed.front() - valence - 1);
    } else {
      const auto target = std::find_if(allowed.begin(), allowed.end(),
                                       [&](int v) { return v >= valence; });
      hydrogens = *target - valence;
    }
    graph.set_implicit_hydrogens(i, hydrogens);
  }
  return graph;
}

} // namespace glassmol::chem
