//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/descriptors/pool.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <unordered_map>

#include "glassmol/chem/elements.hpp"
#include "glassmol/chem/graph_algo.hpp"

namespace glassmol::desc {

using chem::BondOrder;
using chem::MolecularGraph;

std::string_view category_name(Category category) noexcept {
  switch (category) {
  case Category::kTopological:
    return "topological";
  case Category::kFragment:
    return "fragment";
  case Category::kMolecular:
    return "molecular";
  case Category::kSurface:
    return "surface";
  case Category::kHeterocycle:
    return "heterocycle";
  case Category::kLipinski:
    return "lipinski";
  case Category::kQed:
    return "qed";
  }
  return "unknown";
}

const std::vector<ConceptDescriptor> &pool() {
  using C = Category;
  static const std::vector<ConceptDescriptor> kPool = {
      {"molecular_weight", C::kMolecular, "Average molecular weight in g/mol"},
      {"heavy_atom_count", C::kMolecular, "Number of non-hydrogen atoms"},
      {"carbon_count", C::kMolecular, "Number of carbon atoms"},
      {"nitrogen_count", C::kMolecular, "Number of nitrogen atoms"},
      {"oxygen_count", C::kMolecular, "Number of oxygen atoms"},
      {"sulfur_count", C::kMolecular, "Number of sulfur atoms"},
      {"halogen_count", C::kMolecular, "Number of F, Cl, Br and I atoms"},
      {"formal_charge_sum", C::kMolecular, "Net formal charge of the molecule"},
      {"fraction_csp3", C::kMolecular,
       "Fraction of carbons that are sp3 (saturated)"},
      {"flexibility", C::kMolecular,
       "Rotatable bonds per heavy atom, a molecular flexibility index"},
      {"crippen_logp", C::kMolecular,
       "Wildman-Crippen octanol/water partition coefficient (lipophilicity)"},
      {"wiener_index", C::kTopological,
       "Sum of shortest-path distances over all atom pairs"},
      {"zagreb_m1", C::kTopological, "First Zagreb index: sum of squared degrees"},
      {"zagreb_m2", C::kTopological,
       "Second Zagreb index: sum over bonds of degree products"},
      {"graph_diameter", C::kTopological,
       "Longest shortest path between two atoms (molecular extent)"},
      {"max_ring_size", C::kTopological, "Size of the largest smallest ring"},
      {"ring_count", C::kTopological, "Number of rings"},
      {"rotatable_bonds", C::kTopological,
       "Number of rotatable single bonds (amide C-N excluded)"},
      {"aromatic_ring_count", C::kTopological, "Number of aromatic rings"},
      {"tpsa", C::kSurface,
       "Topological polar surface area from N and O contributions"},
      {"crippen_mr", C::kSurface,
       "Wildman-Crippen molar refractivity (polarizability and size)"},
      {"carboxylic_acid", C::kFragment, "Count of carboxylic acid groups"},
      {"ester", C::kFragment, "Count of ester groups"},
      {"amide", C::kFragment, "Count of amide groups"},
      {"primary_amine", C::kFragment, "Count of primary aliphatic amines"},
      {"secondary_amine", C::kFragment, "Count of secondary aliphatic amines"},
      {"tertiary_amine", C::kFragment, "Count of tertiary aliphatic amines"},
      {"aniline", C::kFragment,
       "Count of aniline groups (amine nitrogen on a benzene ring)"},
      {"nitro", C::kFragment, "Count of nitro groups"},
      {"nitrile", C::kFragment, "Count of nitrile groups"},
      {"hydroxyl", C::kFragment, "Count of hydroxyl groups"},
      {"ether", C::kFragment, "Count of ether oxygens"},
      {"ketone", C::kFragment, "Count of ketone groups"},
      {"aldehyde", C::kFragment, "Count of aldehyde groups"},
      {"halide", C::kFragment, "Count of carbon-bound halogens"},
      {"sulfonamide", C::kFragment, "Count of sulfonamide groups"},
      {"methoxy", C::kFragment, "Count of methoxy groups"},
      {"piperazine", C::kFragment, "Count of piperazine rings"},
      {"heterocycle_count", C::kHeterocycle,
       "Number of rings containing at least one non-carbon atom"},
      {"aromatic_heterocycle_count", C::kHeterocycle,
       "Number of aromatic rings containing a heteroatom"},
      {"ring_nitrogen_count", C::kHeterocycle, "Number of nitrogen atoms in rings"},
      {"ring_oxygen_count", C::kHeterocycle, "Number of oxygen atoms in rings"},
      {"hbd", C::kLipinski, "Hydrogen-bond donors: hydrogens on N and O"},
      {"hba", C::kLipinski, "Hydrogen-bond acceptors: count of N and O atoms"},
      {"lipinski_violations", C::kLipinski,
       "Rule-of-five violations (MW>500, logP>5, HBD>5, HBA>10)"},
      {"ro5_pass", C::kLipinski, "1 when at most one rule-of-five violation"},
      {"qed", C::kQed, "Quantitative estimate of drug-likeness (mean weights)"},
      {"qed_unweighted", C::kQed,
       "Quantitative estimate of drug-likeness with equal weights"},
  };
  return kPool;
}

std::vector<std::string> pool_names() {
  std::vector<std::string> names;
  for (const auto &d : pool())
    names.push_back(d.name);
  return names;
}

std::optional<int> pool_index(std::string_view name) {
  const auto &p = pool();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].name == name)
      return static_cast<int>(i);
  }
  return std::nullopt;
}

DescriptorFailure::DescriptorFailure(std::string descriptor, std::string cause)
    : Error(ErrorCategory::kData, "DescriptorFailure",
            descriptor + ": " + cause),
      descriptor_(std::move(descriptor)), cause_(std::move(cause)) {}

double molecular_weight(const MolecularGraph &g) {
  const double h = chem::element(1).atomic_weight;
  double total = 0.0;
  for (const chem::Atom &a : g.atoms())
    total += chem::element(a.atomic_number).atomic_weight + h * a.hydrogen_count();
  return total;
}

long long wiener_index(const MolecularGraph &g) {
  const chem::DistanceMatrix d = chem::shortest_path_matrix(g);
  long long sum = 0;
  for (int i = 0; i < g.num_atoms(); ++i) {
    for (int j = i + 1; j < g.num_atoms(); ++j) {
      if (d(i, j) != chem::kUnreachable)
        sum += d(i, j);
    }
  }
  return sum;
}

int rotatable_bonds(const MolecularGraph &g, const DescriptorTables &tables) {
  std::set<std::pair<int, int>> amide;
  for (const Embedding &e : find_embeddings(g, tables.fragment("amide").pattern))
    amide.insert(std::minmax(e[0], e[2]));
  int count = 0;
  for (int b = 0; b < g.num_bonds(); ++b) {
    const chem::Bond &bond = g.bond(b);
    if (bond.order != BondOrder::kSingle || g.bond_in_ring(b))
      continue;
    if (g.degree(bond.a) < 2 || g.degree(bond.b) < 2)
      continue;
    if (amide.count(std::minmax(bond.a, bond.b)))
      continue;
    ++count;
  }
  return count;
}

double tpsa(const MolecularGraph &g, const DescriptorTables &tables) {
  double total = 0.0;
  for (int i = 0; i < g.num_atoms(); ++i) {
    const chem::Atom &a = g.atom(i);
    if (a.atomic_number != 7 && a.atomic_number != 8)
      continue;
    int nbrs = 0, single = 0, dbl = 0, triple = 0, arom = 0;
    for (const chem::Neighbor &nb : g.neighbors(i)) {
      if (g.atom(nb.atom).is_hydrogen())
        continue;
      ++nbrs;
      switch (g.bond(nb.bond).order) {
      case BondOrder::kSingle:
        ++single;
        break;
      case BondOrder::kDouble:
        ++dbl;
        break;
      case BondOrder::kTriple:
        ++triple;
        break;
      case BondOrder::kAromatic:
        ++arom;
        break;
      }
    }
    const int h = g.total_hydrogens(i);
    const int ring3 = g.atom_in_ring_of_size(i, 3) ? 1 : 0;
    auto fits = [](const std::optional<int> &want, int have) {
      return !want || *want == have;
    };
    double value = -1.0;
    for (const TpsaRule &r : tables.tpsa) {
      if (r.atomic_number == a.atomic_number && fits(r.neighbors, nbrs) &&
          fits(r.hydrogens, h) && fits(r.charge, a.formal_charge) &&
          fits(r.single, single) && fits(r.double_, dbl) &&
          fits(r.triple, triple) && fits(r.aromatic, arom) &&
          fits(r.in_ring3, ring3)) {
        value = r.value;
        break;
      }
    }
    if (value < 0.0) {
      value = 0.0;
      for (const TpsaFallback &f : tables.tpsa_fallback) {
        if (f.atomic_number == a.atomic_number)
          value = std::max(0.0, f.base + f.per_neighbor * nbrs + f.per_hydrogen * h);
      }
    }
    total += value;
  }
  return total;
}

namespace {

// Ring atoms and whether every ring edge is aromatic.
bool ring_is_aromatic(const MolecularGraph &g, const std::vector<int> &ring) {
  int aromatic_edges = 0;
  for (std::size_t x = 0; x < ring.size(); ++x) {
    if (!g.atom(ring[x]).aromatic)
      return false;
    for (std::size_t y = x + 1; y < ring.size(); ++y) {
      if (auto b = g.bond_between(ring[x], ring[y]);
          b && g.bond(*b).order == BondOrder::kAromatic)
        ++aromatic_edges;
    }
  }
  return aromatic_edges >= static_cast<int>(ring.size());
}

bool ring_has_heteroatom(const MolecularGraph &g, const std::vector<int> &ring) {
  return std::any_of(ring.begin(), ring.end(),
                     [&](int a) { return g.atom(a).atomic_number != 6; });
}

} // namespace

int aromatic_ring_count(const MolecularGraph &g) {
  return static_cast<int>(
      std::count_if(g.rings().begin(), g.rings().end(),
                    [&](const auto &r) { return ring_is_aromatic(g, r); }));
}

CrippenValues crippen(const MolecularGraph &g, const DescriptorTables &tables) {
  const MolecularGraph full = chem::add_explicit_hydrogens(g);
  CrippenValues out;
  out.atom_types.resize(full.num_atoms());
  for (int i = 0; i < full.num_atoms(); ++i) {
    for (const CrippenRule &rule : tables.crippen) {
      if (matches_at(full, rule.pattern, i)) {
        out.logp += rule.logp;
        out.mr += rule.mr;
        out.atom_types[i] = rule.type;
        break;
      }
    }
  }
  return out;
}

int match_fragment(const MolecularGraph &graph, const FragmentPattern &pattern) {
  return count_matches(graph, pattern);
}

ConceptVector compute_pool(const MolecularGraph &input,
                           const DescriptorTables &tables) {
  const MolecularGraph g = chem::suppress_hydrogens(input);
  const auto &p = pool();
  std::vector<double> values(p.size(), 0.0);
  std::vector<bool> done(p.size(), false);

  auto put = [&](std::string_view name, const std::function<double()> &fn) {
    const int idx = *pool_index(name);
    double v;
    try {
      v = fn();
    } catch (const DescriptorFailure &) {
      throw;
    } catch (const std::exception &e) {
      throw DescriptorFailure(std::string(name), e.what());
    }
    if (!std::isfinite(v))
      throw DescriptorFailure(std::string(name), "non-finite value");
    values[idx] = v;
    done[idx] = true;
    return v;
  };
  auto count_element = [&](std::initializer_list<int> zs) {
    return static_cast<double>(std::count_if(
        g.atoms().begin(), g.atoms().end(), [&](const chem::Atom &a) {
          return std::find(zs.begin(), zs.end(), a.atomic_number) != zs.end();
        }));
  };

  const double mw = put("molecular_weight", [&] { return molecular_weight(g); });
  const double heavy = put("heavy_atom_count", [&] {
    return static_cast<double>(std::count_if(
        g.atoms().begin(), g.atoms().end(),
        [](const chem::Atom &a) { return !a.is_hydrogen(); }));
  });
  put("carbon_count", [&] { return count_element({6}); });
  put("nitrogen_count", [&] { return count_element({7}); });
  put("oxygen_count", [&] { return count_element({8}); });
  put("sulfur_count", [&] { return count_element({16}); });
  put("halogen_count", [&] { return count_element({9, 17, 35, 53}); });
  put("formal_charge_sum", [&] {
    int sum = 0;
    for (const chem::Atom &a : g.atoms())
      sum += a.formal_charge;
    return static_cast<double>(sum);
  });
  put("fraction_csp3", [&] {
    int carbons = 0, sp3 = 0;
    for (int i = 0; i < g.num_atoms(); ++i) {
      if (g.atom(i).atomic_number != 6)
        continue;
      ++carbons;
      const bool saturated =
          !g.atom(i).aromatic &&
          std::all_of(g.neighbors(i).begin(), g.neighbors(i).end(),
                      [&](const chem::Neighbor &nb) {
                        return g.bond(nb.bond).order == BondOrder::kSingle;
                      });
      sp3 += saturated ? 1 : 0;
    }
    return carbons ? static_cast<double>(sp3) / carbons : 0.0;
  });
  const double rot = put("rotatable_bonds",
                         [&] { return static_cast<double>(rotatable_bonds(g, tables)); });
  put("flexibility", [&] { return heavy > 0 ? rot / heavy : 0.0; });

  const CrippenValues cr = [&] {
    try {
      return crippen(g, tables);
    } catch (const std::exception &e) {
      throw DescriptorFailure("crippen_logp", e.what());
    }
  }();
  const double logp = put("crippen_logp", [&] { return cr.logp; });
  put("crippen_mr", [&] { return cr.mr; });

  const chem::DistanceMatrix dist = chem::shortest_path_matrix(g);
  put("wiener_index", [&] { return static_cast<double>(wiener_index(g)); });
  put("zagreb_m1", [&] {
    double s = 0;
    for (int i = 0; i < g.num_atoms(); ++i)
      s += static_cast<double>(g.degree(i)) * g.degree(i);
    return s;
  });
  put("zagreb_m2", [&] {
    double s = 0;
    for (const chem::Bond &b : g.bonds())
      s += static_cast<double>(g.degree(b.a)) * g.degree(b.b);
    return s;
  });
  put("graph_diameter", [&] {
    int best = 0;
    for (int i = 0; i < g.num_atoms(); ++i) {
      for (int j = i + 1; j < g.num_atoms(); ++j) {
        if (dist(i, j) != chem::kUnreachable)
          best = std::max(best, dist(i, j));
      }
    }
    return static_cast<double>(best);
  });
  put("max_ring_size", [&] {
    std::size_t best = 0;
    for (const auto &r : g.rings())
      best = std::max(best, r.size());
    return static_cast<double>(best);
  });
  put("ring_count", [&] { return static_cast<double>(g.rings().size()); });
  const double arom =
      put("aromatic_ring_count", [&] { return static_cast<double>(aromatic_ring_count(g)); });
  const double psa = put("tpsa", [&] { return tpsa(g, tables); });

  int alerts = 0;
  for (const FragmentDef &f : tables.fragments) {
    if (!pool_index(f.name))
      continue;
    const double n = put(f.name, [&] { return static_cast<double>(match_fragment(g, f.pattern)); });
    if (f.alert && n > 0)
      ++alerts;
  }

  put("heterocycle_count", [&] {
    return static_cast<double>(
        std::count_if(g.rings().begin(), g.rings().end(),
                      [&](const auto &r) { return ring_has_heteroatom(g, r); }));
  });
  put("aromatic_heterocycle_count", [&] {
    return static_cast<double>(std::count_if(
        g.rings().begin(), g.rings().end(), [&](const auto &r) {
          return ring_has_heteroatom(g, r) && ring_is_aromatic(g, r);
        }));
  });
  auto ring_atoms_of = [&](int z) {
    int n = 0;
    for (int i = 0; i < g.num_atoms(); ++i)
      n += (g.atom(i).atomic_number == z && g.atom_in_ring(i)) ? 1 : 0;
    return static_cast<double>(n);
  };
  put("ring_nitrogen_count", [&] { return ring_atoms_of(7); });
  put("ring_oxygen_count", [&] { return ring_atoms_of(8); });

  const double hbd = put("hbd", [&] {
    int n = 0;
    for (int i = 0; i < g.num_atoms(); ++i) {
      const int z = g.atom(i).atomic_number;
      if (z == 7 || z == 8)
        n += g.total_hydrogens(i);
    }
    return static_cast<double>(n);
  });
  const double hba = put("hba", [&] { return count_element({7, 8}); });
  const double violations = put("lipinski_violations", [&] {
    return static_cast<double>((mw > 500) + (logp > 5) + (hbd > 5) + (hba > 10));
  });
  put("ro5_pass", [&] { return violations <= 1 ? 1.0 : 0.0; });

  const std::unordered_map<std::string, double> qed_inputs = {
      {"molecular_weight", mw}, {"crippen_logp", logp},
      {"hba", hba},             {"hbd", hbd},
      {"tpsa", psa},            {"rotatable_bonds", rot},
      {"aromatic_ring_count", arom}, {"alerts", static_cast<double>(alerts)}};
  auto qed_score = [&](bool weighted) {
    double num = 0.0, den = 0.0;
    for (const QedProperty &q : tables.qed) {
      auto it = qed_inputs.find(q.name);
      if (it == qed_inputs.end())
        throw std::runtime_error("unknown property '" + q.name + "'");
      const double w = weighted ? q.weight : 1.0;
      num += w * std::log(std::max(q.desirability(it->second), 1e-300));
      den += w;
    }
    return den > 0 ? std::exp(num / den) : 0.0;
  };
  put("qed", [&] { return qed_score(true); });
  put("qed_unweighted", [&] { return qed_score(false); });

  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!done[i])
      throw DescriptorFailure(p[i].name, "no definition in the loaded tables");
  }
  return ConceptVector{std::move(values), pool_names(), false, nullptr};
}

} // namespace glassmol::desc
