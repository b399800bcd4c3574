//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/chem/scaffold.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <set>
#include <vector>

#include "glassmol/chem/graph_algo.hpp"

namespace glassmol::chem {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t seed, std::uint64_t v) {
  return mix(seed ^ (v + 0x632be59bd9b4e019ULL + (seed << 6) + (seed >> 2)));
}

std::size_t count_classes(const std::vector<std::uint64_t> &inv) {
  return std::set<std::uint64_t>(inv.begin(), inv.end()).size();
}

} // namespace

std::string canonical_key(const MolecularGraph &g) {
  const int n = g.num_atoms();
  if (n == 0)
    return std::string(kEmptyScaffoldKey);

  std::vector<std::uint64_t> inv(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);
    std::vector<int> orders;
    for (const Neighbor &nb : g.neighbors(i))
      orders.push_back(static_cast<int>(g.bond(nb.bond).order));
    std::sort(orders.begin(), orders.end());
    std::uint64_t h = mix(static_cast<std::uint64_t>(a.atomic_number));
    h = combine(h, static_cast<std::uint64_t>(a.formal_charge + 1000));
    h = combine(h, static_cast<std::uint64_t>(g.degree(i)));
    h = combine(h, a.aromatic ? 1 : 0);
    for (int o : orders)
      h = combine(h, static_cast<std::uint64_t>(o));
    inv[i] = h;
  }

  std::size_t classes = count_classes(inv);
  std::vector<std::uint64_t> next(n);
  for (int iter = 0; iter < n; ++iter) {
    for (int i = 0; i < n; ++i) {
      std::vector<std::uint64_t> env;
      for (const Neighbor &nb : g.neighbors(i))
        env.push_back(combine(static_cast<std::uint64_t>(g.bond(nb.bond).order),
                              inv[nb.atom]));
      std::sort(env.begin(), env.end());
      std::uint64_t h = inv[i];
      for (std::uint64_t e : env)
        h = combine(h, e);
      next[i] = h;
    }
    inv.swap(next);
    const std::size_t refined = count_classes(inv);
    if (refined <= classes)
      break;
    classes = refined;
  }

  std::sort(inv.begin(), inv.end());
  std::uint64_t key = combine(mix(static_cast<std::uint64_t>(n)),
                              static_cast<std::uint64_t>(g.num_bonds()));
  for (std::uint64_t v : inv)
    key = combine(key, v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "scaffold:%016llx",
                static_cast<unsigned long long>(key));
  return buf;
}

Scaffold murcko_scaffold(const MolecularGraph &input) {
  const MolecularGraph g = suppress_hydrogens(input);
  const int n = g.num_atoms();
  if (g.rings().empty())
    return Scaffold{MolecularGraph(), std::string(kEmptyScaffoldKey)};

  std::vector<bool> keep(n, true);
  std::vector<int> degree(n);
  for (int i = 0; i < n; ++i)
    degree[i] = g.degree(i);

  auto retained_exocyclic = [&](int v) {
    for (const Neighbor &nb : g.neighbors(v)) {
      if (keep[nb.atom] && g.atom_in_ring(nb.atom) &&
          g.bond(nb.bond).order == BondOrder::kDouble)
        return true;
    }
    return false;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (!keep[v] || g.atom_in_ring(v) || degree[v] > 1)
        continue;
      if (degree[v] == 1 && retained_exocyclic(v))
        continue;
      keep[v] = false;
      changed = true;
      for (const Neighbor &nb : g.neighbors(v))
        if (keep[nb.atom])
          --degree[nb.atom];
    }
  }

  Scaffold s;
  s.graph = induced_subgraph(g, keep);
  s.canonical_key = canonical_key(s.graph);
  return s;
}

} // namespace glassmol::chem
