//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/chem/rings.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>

namespace glassmol::chem {
namespace {

using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  std::vector<int> atoms; // sorted
  EdgeSet edges;
};

int lowest_bit(const EdgeSet &v) {
  for (std::size_t w = 0; w < v.size(); ++w) {
    if (v[w] != 0)
      return static_cast<int>(w * 64) + __builtin_ctzll(v[w]);
  }
  return -1;
}

void xor_into(EdgeSet &dst, const EdgeSet &src) {
  for (std::size_t w = 0; w < dst.size(); ++w)
    dst[w] ^= src[w];
}

// Atoms that can lie on a cycle: repeatedly strip degree <= 1 atoms.
std::vector<bool> cyclic_core(const MolecularGraph &g) {
  const int n = g.num_atoms();
  std::vector<int> deg(n);
  std::vector<bool> alive(n, true);
  std::queue<int> q;
  for (int i = 0; i < n; ++i) {
    deg[i] = g.degree(i);
    if (deg[i] <= 1)
      q.push(i);
  }
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    if (!alive[v])
      continue;
    alive[v] = false;
    for (const Neighbor &nb : g.neighbors(v)) {
      if (alive[nb.atom] && --deg[nb.atom] <= 1)
        q.push(nb.atom);
    }
  }
  return alive;
}

} // namespace

std::vector<std::vector<int>> perceive_rings(const MolecularGraph &g) {
  const int n = g.num_atoms();
  const int m = g.num_bonds();
  const int target = m - n + g.num_components();
  if (target <= 0)
    return {};

  const std::vector<bool> core = cyclic_core(g);
  const std::size_t words = (static_cast<std::size_t>(m) + 63) / 64;

  // Sorted neighbor lists restricted to the core keep BFS deterministic.
  std::vector<std::vector<Neighbor>> adj(n);
  for (int v = 0; v < n; ++v) {
    if (!core[v])
      continue;
    for (const Neighbor &nb : g.neighbors(v))
      if (core[nb.atom])
        adj[v].push_back(nb);
    std::sort(adj[v].begin(), adj[v].end(),
              [](const Neighbor &a, const Neighbor &b) { return a.atom < b.atom; });
  }

  std::vector<Candidate> candidates;
  std::set<EdgeSet> seen;
  std::vector<int> dist(n), parent(n), parent_bond(n), stamp(n, -1);
  int stamp_id = 0;
  for (int root = 0; root < n; ++root) {
    if (!core[root])
      continue;
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> q;
    dist[root] = 0;
    parent[root] = -1;
    parent_bond[root] = -1;
    q.push(root);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const Neighbor &nb : adj[v]) {
        if (dist[nb.atom] < 0) {
          dist[nb.atom] = dist[v] + 1;
          parent[nb.atom] = v;
          parent_bond[nb.atom] = nb.bond;
          q.push(nb.atom);
        }
      }
    }
    for (int e = 0; e < m; ++e) {
      const Bond &b = g.bond(e);
      if (!core[b.a] || !core[b.b] || dist[b.a] < 0 || dist[b.b] < 0)
        continue;
      if (parent_bond[b.a] == e || parent_bond[b.b] == e)
        continue;
      Candidate c;
      c.edges.assign(words, 0);
      c.edges[e / 64] ^= std::uint64_t{1} << (e % 64);
      std::vector<int> path_atoms;
      bool simple = true;
      ++stamp_id;
      for (int start : {b.a, b.b}) {
        for (int v = start; v != root; v = parent[v]) {
          if (stamp[v] == stamp_id) {
            simple = false;
            break;
          }
          stamp[v] = stamp_id;
          path_atoms.push_back(v);
          const int pb = parent_bond[v];
          c.edges[pb / 64] ^= std::uint64_t{1} << (pb % 64);
        }
        if (!simple)
          break;
      }
      if (!simple)
        continue;
      path_atoms.push_back(root);
      if (path_atoms.size() < 3)
        continue;
      std::sort(path_atoms.begin(), path_atoms.end());
      if (!seen.insert(c.edges).second)
        continue;
      c.atoms = std::move(path_atoms);
      candidates.push_back(std::move(c));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.atoms.size() != b.atoms.size())
                return a.atoms.size() < b.atoms.size();
              return a.atoms < b.atoms;
            });

  // Greedy GF(2) independence test against a basis keyed by pivot bit.
  std::vector<EdgeSet> basis;
  std::vector<int> pivots;
  std::vector<std::vector<int>> rings;
  for (const Candidate &c : candidates) {
    EdgeSet v = c.edges;
    bool changed = true;
    while (changed) {
      changed = false;
      const int low = lowest_bit(v);
      if (low < 0)
        break;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (pivots[i] == low) {
          xor_into(v, basis[i]);
          changed = true;
          break;
        }
      }
    }
    const int pivot = lowest_bit(v);
    if (pivot < 0)
      continue;
    basis.push_back(std::move(v));
    pivots.push_back(pivot);
    rings.push_back(c.atoms);
    if (static_cast<int>(rings.size()) == target)
      break;
  }
  return rings;
}

} // namespace glassmol::chem
