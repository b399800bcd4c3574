//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/chem/graph_algo.hpp"

#include <algorithm>
#include <queue>

namespace glassmol::chem {

DistanceMatrix shortest_path_matrix(const MolecularGraph &g) {
  const int n = g.num_atoms();
  DistanceMatrix d(n);
  std::vector<int> queue;
  queue.reserve(n);
  for (int s = 0; s < n; ++s) {
    queue.clear();
    d(s, s) = 0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (const Neighbor &nb : g.neighbors(v)) {
        if (d(s, nb.atom) == kUnreachable) {
          d(s, nb.atom) = d(s, v) + 1;
          queue.push_back(nb.atom);
        }
      }
    }
  }
  return d;
}

std::vector<int> component_labels(const MolecularGraph &g) {
  std::vector<int> label(g.num_atoms(), -1);
  int next = 0;
  for (int s = 0; s < g.num_atoms(); ++s) {
    if (label[s] >= 0)
      continue;
    std::queue<int> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const Neighbor &nb : g.neighbors(v)) {
        if (label[nb.atom] < 0) {
          label[nb.atom] = next;
          q.push(nb.atom);
        }
      }
    }
    ++next;
  }
  return label;
}

MolecularGraph induced_subgraph(const MolecularGraph &g,
                                const std::vector<bool> &keep) {
  std::vector<int> remap(g.num_atoms(), -1);
  std::vector<Atom> atoms;
  for (int i = 0; i < g.num_atoms(); ++i) {
    if (keep[i]) {
      remap[i] = static_cast<int>(atoms.size());
      atoms.push_back(g.atom(i));
    }
  }
  std::vector<Bond> bonds;
  for (const Bond &b : g.bonds()) {
    if (remap[b.a] >= 0 && remap[b.b] >= 0)
      bonds.push_back({remap[b.a], remap[b.b], b.order});
  }
  MolecularGraph out(std::move(atoms), std::move(bonds), g.source_smiles());
  std::vector<std::vector<int>> rings;
  for (const auto &ring : g.rings()) {
    std::vector<int> mapped;
    for (int a : ring) {
      if (remap[a] < 0)
        break;
      mapped.push_back(remap[a]);
    }
    if (mapped.size() == ring.size())
      rings.push_back(std::move(mapped));
  }
  out.set_rings(std::move(rings));
  return out;
}

MolecularGraph suppress_hydrogens(const MolecularGraph &g) {
  std::vector<bool> keep(g.num_atoms(), true);
  std::vector<int> extra_h(g.num_atoms(), 0);
  for (int i = 0; i < g.num_atoms(); ++i) {
    const Atom &a = g.atom(i);
    if (!a.is_hydrogen() || a.formal_charge != 0 || a.isotope || g.degree(i) != 1)
      continue;
    const int heavy = g.neighbors(i).front().atom;
    if (g.atom(heavy).is_hydrogen())
      continue;
    keep[i] = false;
    ++extra_h[heavy];
  }
  if (std::all_of(keep.begin(), keep.end(), [](bool k) { return k; }))
    return g;

  MolecularGraph out = induced_subgraph(g, keep);
  std::vector<Atom> atoms = out.atoms();
  int j = 0;
  for (int i = 0; i < g.num_atoms(); ++i) {
    if (!keep[i])
      continue;
    Atom &a = atoms[j++];
    if (a.explicit_h)
      *a.explicit_h += extra_h[i];
    else
      a.implicit_h += extra_h[i];
  }
  MolecularGraph folded(std::move(atoms), out.bonds(), g.source_smiles());
  folded.set_rings(out.rings());
  return folded;
}

MolecularGraph add_explicit_hydrogens(const MolecularGraph &g) {
  std::vector<Atom> atoms = g.atoms();
  std::vector<Bond> bonds = g.bonds();
  for (int i = 0; i < g.num_atoms(); ++i) {
    const int nh = atoms[i].hydrogen_count();
    atoms[i].implicit_h = 0;
    if (atoms[i].explicit_h)
      atoms[i].explicit_h = 0;
    for (int k = 0; k < nh; ++k) {
      Atom h;
      h.element = "H";
      h.atomic_number = 1;
      h.explicit_h = 0;
      bonds.push_back({i, static_cast<int>(atoms.size()), BondOrder::kSingle});
      atoms.push_back(std::move(h));
    }
  }
  MolecularGraph out(std::move(atoms), std::move(bonds), g.source_smiles());
  out.set_rings(g.rings());
  return out;
}

} // namespace glassmol::chem
