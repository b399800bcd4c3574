//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/descriptors/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "glassmol/chem/elements.hpp"

namespace glassmol::desc {

using chem::BondOrder;
using chem::MolecularGraph;

enum class Op { kPrim, kNot, kAnd, kOr };

enum class AtomPrim {
  kAny,
  kAtomicNumber,
  kAromatic,
  kAliphatic,
  kTotalH,
  kConnectivity,
  kDegree,
  kInRing,
  kRingCount,
  kRingSize,
  kCharge,
};

struct AtomExpr {
  Op op = Op::kPrim;
  AtomPrim prim = AtomPrim::kAny;
  int value = 0;
  std::vector<std::shared_ptr<const AtomExpr>> kids;

  bool eval(const MolecularGraph &g, int i) const {
    switch (op) {
    case Op::kNot:
      return !kids[0]->eval(g, i);
    case Op::kAnd:
      return std::all_of(kids.begin(), kids.end(),
                         [&](const auto &k) { return k->eval(g, i); });
    case Op::kOr:
      return std::any_of(kids.begin(), kids.end(),
                         [&](const auto &k) { return k->eval(g, i); });
    case Op::kPrim:
      break;
    }
    const chem::Atom &a = g.atom(i);
    switch (prim) {
    case AtomPrim::kAny:
      return true;
    case AtomPrim::kAtomicNumber:
      return a.atomic_number == value;
    case AtomPrim::kAromatic:
      return a.aromatic;
    case AtomPrim::kAliphatic:
      return !a.aromatic;
    case AtomPrim::kTotalH:
      return g.total_hydrogens(i) == value;
    case AtomPrim::kConnectivity:
      return g.degree(i) + a.hydrogen_count() == value;
    case AtomPrim::kDegree:
      return g.degree(i) == value;
    case AtomPrim::kInRing:
      return g.atom_in_ring(i);
    case AtomPrim::kRingCount:
      return g.atom_ring_count(i) == value;
    case AtomPrim::kRingSize:
      return g.atom_in_ring_of_size(i, value);
    case AtomPrim::kCharge:
      return a.formal_charge == value;
    }
    return false;
  }
};

enum class BondPrim { kAny, kSingle, kDouble, kTriple, kAromatic, kRing };

struct BondExpr {
  Op op = Op::kPrim;
  BondPrim prim = BondPrim::kAny;
  std::vector<std::shared_ptr<const BondExpr>> kids;

  bool eval(const MolecularGraph &g, int b) const {
    switch (op) {
    case Op::kNot:
      return !kids[0]->eval(g, b);
    case Op::kAnd:
      return std::all_of(kids.begin(), kids.end(),
                         [&](const auto &k) { return k->eval(g, b); });
    case Op::kOr:
      return std::any_of(kids.begin(), kids.end(),
                         [&](const auto &k) { return k->eval(g, b); });
    case Op::kPrim:
      break;
    }
    const BondOrder order = g.bond(b).order;
    switch (prim) {
    case BondPrim::kAny:
      return true;
    case BondPrim::kSingle:
      return order == BondOrder::kSingle;
    case BondPrim::kDouble:
      return order == BondOrder::kDouble;
    case BondPrim::kTriple:
      return order == BondOrder::kTriple;
    case BondPrim::kAromatic:
      return order == BondOrder::kAromatic;
    case BondPrim::kRing:
      return g.bond_in_ring(b);
    }
    return false;
  }
};

namespace {

template <class E>
std::shared_ptr<const E> combine(Op op,
                                 std::vector<std::shared_ptr<const E>> kids) {
  if (kids.size() == 1)
    return kids.front();
  auto e = std::make_shared<E>();
  e->op = op;
  e->kids = std::move(kids);
  return e;
}

std::shared_ptr<const AtomExpr> atom_prim(AtomPrim prim, int value = 0) {
  auto e = std::make_shared<AtomExpr>();
  e->prim = prim;
  e->value = value;
  return e;
}

std::shared_ptr<const AtomExpr> element_expr(int z, bool aromatic) {
  return combine<AtomExpr>(
      Op::kAnd, {atom_prim(AtomPrim::kAtomicNumber, z),
                 atom_prim(aromatic ? AtomPrim::kAromatic
                                    : AtomPrim::kAliphatic)});
}

std::shared_ptr<const BondExpr> bond_prim(BondPrim prim) {
  auto e = std::make_shared<BondExpr>();
  e->prim = prim;
  return e;
}

std::shared_ptr<const BondExpr> default_bond() {
  return combine<BondExpr>(Op::kOr, {bond_prim(BondPrim::kSingle),
                                     bond_prim(BondPrim::kAromatic)});
}

bool is_bond_char(char c) {
  return c == '-' || c == '=' || c == '#' || c == ':' || c == '~' ||
         c == '@' || c == '!';
}

} // namespace

PatternError::PatternError(std::string_view pattern, std::size_t position,
                           const std::string &detail)
    : Error(ErrorCategory::kData, "PatternError",
            "'" + std::string(pattern) + "' at offset " +
                std::to_string(position) + ": " + detail) {}

class PatternParser {
public:
  explicit PatternParser(std::string_view text) : s_(text) {}

  FragmentPattern parse() {
    FragmentPattern p;
    p.text_ = std::string(s_);
    if (s_.empty())
      fail("empty pattern");
    std::vector<int> stack;
    int prev = -1;
    std::string bond_text;
    std::shared_ptr<const BondExpr> bond;
    std::map<int, std::pair<int, std::pair<std::string,
                                           std::shared_ptr<const BondExpr>>>>
        open_rings;

    auto connect = [&](int a, int b, std::string text,
                       std::shared_ptr<const BondExpr> expr) {
      if (a == b)
        fail("self bond");
      for (const PatternBond &pb : p.bonds_) {
        if ((pb.a == a && pb.b == b) || (pb.a == b && pb.b == a))
          fail("duplicate bond");
      }
      if (!expr)
        expr = default_bond();
      p.bonds_.push_back({a, b, std::move(expr), std::move(text)});
    };

    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(') {
        if (prev < 0 || bond)
          fail("misplaced branch");
        stack.push_back(prev);
        ++pos_;
      } else if (c == ')') {
        if (stack.empty() || bond)
          fail("unbalanced branch");
        prev = stack.back();
        stack.pop_back();
        ++pos_;
      } else if (is_bond_char(c)) {
        if (prev < 0 || bond)
          fail("misplaced bond");
        const std::size_t start = pos_;
        bond = parse_bond_low();
        bond_text = std::string(s_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0)
          fail("ring closure before atom");
        int number = 0;
        if (c == '%') {
          if (pos_ + 2 >= s_.size() ||
              !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
              !std::isdigit(static_cast<unsigned char>(s_[pos_ + 2])))
            fail("bad ring number");
          number = (s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0');
          pos_ += 3;
        } else {
          number = c - '0';
          ++pos_;
        }
        auto it = open_rings.find(number);
        if (it == open_rings.end()) {
          open_rings[number] = {prev, {bond_text, bond}};
        } else {
          auto [other, spec] = it->second;
          if (!bond) {
            bond = spec.second;
            bond_text = spec.first;
          }
          connect(other, prev, bond_text, bond);
          open_rings.erase(it);
        }
        bond.reset();
        bond_text.clear();
      } else {
        const std::size_t start = pos_;
        auto expr = parse_atom();
        const int idx = static_cast<int>(p.atoms_.size());
        p.atoms_.push_back({expr, std::string(s_.substr(start, pos_ - start))});
        if (prev >= 0)
          connect(prev, idx, bond_text, bond);
        else if (bond)
          fail("bond without atom");
        bond.reset();
        bond_text.clear();
        prev = idx;
      }
    }
    if (!stack.empty())
      fail("unbalanced branch");
    if (!open_rings.empty())
      fail("unmatched ring closure");
    if (bond)
      fail("dangling bond");
    if (p.atoms_.size() > 8)
      fail("more than 8 atoms");
    check_connected(p);
    p.automorphisms_ = automorphisms(p);
    return p;
  }

private:
  [[noreturn]] void fail(const std::string &detail) const {
    throw PatternError(s_, pos_, detail);
  }

  bool at(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

  int read_number(int fallback) {
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      return fallback;
    int v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      v = v * 10 + (s_[pos_++] - '0');
    return v;
  }

  std::shared_ptr<const AtomExpr> parse_atom() {
    const char c = s_[pos_];
    if (c == '[') {
      ++pos_;
      bracket_start_ = pos_;
      auto e = parse_atom_low();
      if (!at(']'))
        fail("expected ']'");
      ++pos_;
      return e;
    }
    if (c == '*') {
      ++pos_;
      return atom_prim(AtomPrim::kAny);
    }
    if (c == 'a' || c == 'A') {
      ++pos_;
      return atom_prim(c == 'a' ? AtomPrim::kAromatic : AtomPrim::kAliphatic);
    }
    static constexpr std::string_view kTwo[] = {"Cl", "Br"};
    for (std::string_view sym : kTwo) {
      if (s_.substr(pos_, 2) == sym) {
        pos_ += 2;
        return element_expr(chem::find_element(sym)->atomic_number, false);
      }
    }
    static constexpr std::string_view kOrganic = "BCNOPSFI";
    static constexpr std::string_view kAromaticOrganic = "bcnops";
    if (kOrganic.find(c) != std::string_view::npos) {
      ++pos_;
      return element_expr(chem::find_element(std::string_view(&c, 1))->atomic_number,
                          false);
    }
    if (kAromaticOrganic.find(c) != std::string_view::npos) {
      ++pos_;
      const char up = static_cast<char>(std::toupper(c));
      return element_expr(chem::find_element(std::string_view(&up, 1))->atomic_number,
                          true);
    }
    fail("unknown atom");
  }

  std::shared_ptr<const AtomExpr> parse_atom_low() {
    std::vector<std::shared_ptr<const AtomExpr>> kids{parse_atom_or()};
    while (at(';')) {
      ++pos_;
      kids.push_back(parse_atom_or());
    }
    return combine<AtomExpr>(Op::kAnd, std::move(kids));
  }

  std::shared_ptr<const AtomExpr> parse_atom_or() {
    std::vector<std::shared_ptr<const AtomExpr>> kids{parse_atom_high()};
    while (at(',')) {
      ++pos_;
      kids.push_back(parse_atom_high());
    }
    return combine<AtomExpr>(Op::kOr, std::move(kids));
  }

  std::shared_ptr<const AtomExpr> parse_atom_high() {
    std::vector<std::shared_ptr<const AtomExpr>> kids{parse_atom_unary()};
    while (pos_ < s_.size() && s_[pos_] != ']' && s_[pos_] != ';' &&
           s_[pos_] != ',') {
      if (at('&'))
        ++pos_;
      kids.push_back(parse_atom_unary());
    }
    return combine<AtomExpr>(Op::kAnd, std::move(kids));
  }

  std::shared_ptr<const AtomExpr> parse_atom_unary() {
    if (at('!')) {
      ++pos_;
      auto e = std::make_shared<AtomExpr>();
      e->op = Op::kNot;
      e->kids.push_back(parse_atom_unary());
      return e;
    }
    return parse_atom_primitive();
  }

  std::shared_ptr<const AtomExpr> parse_atom_primitive() {
    if (pos_ >= s_.size())
      fail("unterminated bracket atom");
    const char c = s_[pos_];
    const char next = pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0';
    switch (c) {
    case '#': {
      ++pos_;
      const int z = read_number(-1);
      if (z < 0)
        fail("expected atomic number");
      return atom_prim(AtomPrim::kAtomicNumber, z);
    }
    case '*':
      ++pos_;
      return atom_prim(AtomPrim::kAny);
    case '+':
    case '-': {
      ++pos_;
      int magnitude = 1;
      if (std::isdigit(static_cast<unsigned char>(next))) {
        magnitude = read_number(1);
      } else {
        while (at(c)) {
          ++pos_;
          ++magnitude;
        }
      }
      return atom_prim(AtomPrim::kCharge, c == '+' ? magnitude : -magnitude);
    }
    case 'H':
      // A lone [H] (optionally charged) is a hydrogen atom, otherwise a count.
      if (pos_ == bracket_start_ && (next == ']' || next == '+' || next == '-')) {
        ++pos_;
        return atom_prim(AtomPrim::kAtomicNumber, 1);
      }
      ++pos_;
      return atom_prim(AtomPrim::kTotalH, read_number(1));
    case 'X':
      ++pos_;
      return atom_prim(AtomPrim::kConnectivity, read_number(1));
    case 'D':
      ++pos_;
      return atom_prim(AtomPrim::kDegree, read_number(1));
    case 'R':
    case 'r': {
      if (c == 'R' && std::islower(static_cast<unsigned char>(next)))
        break;
      ++pos_;
      const int v = read_number(-1);
      if (v < 0)
        return atom_prim(AtomPrim::kInRing);
      if (c == 'R' && v == 0) {
        auto e = std::make_shared<AtomExpr>();
        e->op = Op::kNot;
        e->kids.push_back(atom_prim(AtomPrim::kInRing));
        return e;
      }
      if (c == 'R')
        return atom_prim(AtomPrim::kRingCount, v);
      return atom_prim(AtomPrim::kRingSize, v);
    }
    default:
      break;
    }
    if (c == 'A' && !std::islower(static_cast<unsigned char>(next))) {
      ++pos_;
      return atom_prim(AtomPrim::kAliphatic);
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (std::islower(static_cast<unsigned char>(next))) {
        const std::string two{c, next};
        if (const auto *el = chem::find_element(two)) {
          pos_ += 2;
          return element_expr(el->atomic_number, false);
        }
      }
      if (const auto *el = chem::find_element(std::string_view(&c, 1))) {
        ++pos_;
        return element_expr(el->atomic_number, false);
      }
      fail("unknown element");
    }
    static constexpr std::string_view kAromaticTwo[] = {"se", "as", "te"};
    for (std::string_view sym : kAromaticTwo) {
      if (s_.substr(pos_, 2) == sym) {
        pos_ += 2;
        const std::string up{static_cast<char>(std::toupper(sym[0])), sym[1]};
        return element_expr(chem::find_element(up)->atomic_number, true);
      }
    }
    if (c == 'a') {
      ++pos_;
      return atom_prim(AtomPrim::kAromatic);
    }
    static constexpr std::string_view kAromaticOne = "bcnops";
    if (kAromaticOne.find(c) != std::string_view::npos) {
      ++pos_;
      const char up = static_cast<char>(std::toupper(c));
      return element_expr(chem::find_element(std::string_view(&up, 1))->atomic_number,
                          true);
    }
    fail("unknown atom primitive");
  }

  std::shared_ptr<const BondExpr> parse_bond_low() {
    std::vector<std::shared_ptr<const BondExpr>> kids{parse_bond_or()};
    while (at(';')) {
      ++pos_;
      kids.push_back(parse_bond_or());
    }
    return combine<BondExpr>(Op::kAnd, std::move(kids));
  }

  std::shared_ptr<const BondExpr> parse_bond_or() {
    std::vector<std::shared_ptr<const BondExpr>> kids{parse_bond_high()};
    while (at(',')) {
      ++pos_;
      kids.push_back(parse_bond_high());
    }
    return combine<BondExpr>(Op::kOr, std::move(kids));
  }

  std::shared_ptr<const BondExpr> parse_bond_high() {
    std::vector<std::shared_ptr<const BondExpr>> kids{parse_bond_unary()};
    while (pos_ < s_.size() && (is_bond_char(s_[pos_]) || s_[pos_] == '&')) {
      if (at('&'))
        ++pos_;
      kids.push_back(parse_bond_unary());
    }
    return combine<BondExpr>(Op::kAnd, std::move(kids));
  }

  std::shared_ptr<const BondExpr> parse_bond_unary() {
    if (at('!')) {
      ++pos_;
      auto e = std::make_shared<BondExpr>();
      e->op = Op::kNot;
      e->kids.push_back(parse_bond_unary());
      return e;
    }
    if (pos_ >= s_.size())
      fail("expected bond");
    BondPrim prim;
    switch (s_[pos_]) {
    case '-':
      prim = BondPrim::kSingle;
      break;
    case '=':
      prim = BondPrim::kDouble;
      break;
    case '#':
      prim = BondPrim::kTriple;
      break;
    case ':':
      prim = BondPrim::kAromatic;
      break;
    case '~':
      prim = BondPrim::kAny;
      break;
    case '@':
      prim = BondPrim::kRing;
      break;
    default:
      fail("expected bond");
    }
    ++pos_;
    return bond_prim(prim);
  }

  void check_connected(const FragmentPattern &p) const {
    const int n = p.num_atoms();
    std::vector<bool> seen(n, false);
    std::vector<int> todo{0};
    seen[0] = true;
    while (!todo.empty()) {
      const int a = todo.back();
      todo.pop_back();
      for (const PatternBond &b : p.bonds_) {
        if (b.a != a && b.b != a)
          continue;
        const int o = b.a == a ? b.b : b.a;
        if (!seen[o]) {
          seen[o] = true;
          todo.push_back(o);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw PatternError(s_, 0, "disconnected pattern");
  }

  // Permutations preserving atom texts and bond texts.
  static std::vector<std::vector<int>> automorphisms(const FragmentPattern &p) {
    const int n = p.num_atoms();
    std::map<std::pair<int, int>, std::string> bond_text;
    for (const PatternBond &b : p.bonds_) {
      bond_text[{b.a, b.b}] = b.text;
      bond_text[{b.b, b.a}] = b.text;
    }
    std::vector<std::vector<int>> out;
    std::vector<int> perm(n, -1);
    std::vector<bool> used(n, false);
    auto rec = [&](auto &&self, int i) -> void {
      if (i == n) {
        out.push_back(perm);
        return;
      }
      for (int j = 0; j < n; ++j) {
        if (used[j] || p.atoms_[j].text != p.atoms_[i].text)
          continue;
        bool ok = true;
        for (int k = 0; k < i && ok; ++k) {
          auto a = bond_text.find({i, k});
          auto b = bond_text.find({j, perm[k]});
          ok = (a == bond_text.end()) == (b == bond_text.end()) &&
               (a == bond_text.end() || a->second == b->second);
        }
        if (!ok)
          continue;
        perm[i] = j;
        used[j] = true;
        self(self, i + 1);
        used[j] = false;
      }
    };
    rec(rec, 0);
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t bracket_start_ = 0;
};

FragmentPattern FragmentPattern::parse(std::string_view text) {
  return PatternParser(text).parse();
}

namespace {

class Matcher {
public:
  Matcher(const MolecularGraph &g, const FragmentPattern &p) : g_(g), p_(p) {
    const int n = p.num_atoms();
    ok_.assign(n, std::vector<char>(g.num_atoms(), 0));
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < g.num_atoms(); ++i)
        ok_[k][i] = p.atoms()[k].expr->eval(g, i);
    }
    // BFS order; each later atom hangs off an already placed parent.
    order_.push_back(0);
    parent_.assign(n, -1);
    std::vector<bool> placed(n, false);
    placed[0] = true;
    for (std::size_t h = 0; h < order_.size(); ++h) {
      for (const PatternBond &b : p.bonds()) {
        const int a = order_[h];
        if (b.a != a && b.b != a)
          continue;
        const int o = b.a == a ? b.b : b.a;
        if (!placed[o]) {
          placed[o] = true;
          parent_[o] = a;
          order_.push_back(o);
        }
      }
    }
    map_.assign(n, -1);
    used_.assign(g.num_atoms(), false);
  }

  // Calls visit(map) for each embedding; visit returns false to stop.
  template <class Visit> void run(int first, Visit &&visit) {
    for (int i = 0; i < g_.num_atoms(); ++i) {
      if (first >= 0 && i != first)
        continue;
      if (!ok_[0][i])
        continue;
      map_[0] = i;
      used_[i] = true;
      const bool go_on = extend(1, visit);
      used_[i] = false;
      map_[0] = -1;
      if (!go_on)
        return;
    }
  }

private:
  const PatternBond *find_bond(int a, int b) const {
    for (const PatternBond &pb : p_.bonds()) {
      if ((pb.a == a && pb.b == b) || (pb.a == b && pb.b == a))
        return &pb;
    }
    return nullptr;
  }

  template <class Visit> bool extend(std::size_t depth, Visit &visit) {
    if (depth == order_.size())
      return visit(static_cast<const Embedding &>(map_));
    const int k = order_[depth];
    const int parent = map_[parent_[k]];
    const PatternBond *pb = find_bond(k, parent_[k]);
    for (const chem::Neighbor &nb : g_.neighbors(parent)) {
      const int t = nb.atom;
      if (used_[t] || !ok_[k][t] || !pb->expr->eval(g_, nb.bond))
        continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const int j = order_[d];
        if (j == parent_[k])
          continue;
        if (const PatternBond *other = find_bond(k, j)) {
          auto tb = g_.bond_between(t, map_[j]);
          ok = tb && other->expr->eval(g_, *tb);
        }
      }
      if (!ok)
        continue;
      map_[k] = t;
      used_[t] = true;
      const bool go_on = extend(depth + 1, visit);
      used_[t] = false;
      map_[k] = -1;
      if (!go_on)
        return false;
    }
    return true;
  }

  const MolecularGraph &g_;
  const FragmentPattern &p_;
  std::vector<std::vector<char>> ok_;
  std::vector<int> order_;
  std::vector<int> parent_;
  Embedding map_;
  std::vector<bool> used_;
};

} // namespace

std::vector<Embedding> find_embeddings(const MolecularGraph &graph,
                                       const FragmentPattern &pattern) {
  std::set<Embedding> unique;
  Matcher m(graph, pattern);
  m.run(-1, [&](const Embedding &e) {
    Embedding best = e;
    Embedding cand(e.size());
    for (const auto &perm : pattern.automorphisms()) {
      for (std::size_t i = 0; i < e.size(); ++i)
        cand[i] = e[perm[i]];
      best = std::min(best, cand);
    }
    unique.insert(best);
    return true;
  });
  return {unique.begin(), unique.end()};
}

int count_matches(const MolecularGraph &graph, const FragmentPattern &pattern) {
  return static_cast<int>(find_embeddings(graph, pattern).size());
}

bool matches_at(const MolecularGraph &graph, const FragmentPattern &pattern,
                int atom) {
  bool found = false;
  Matcher m(graph, pattern);
  m.run(atom, [&](const Embedding &) {
    found = true;
    return false;
  });
  return found;
}

} // namespace glassmol::desc
