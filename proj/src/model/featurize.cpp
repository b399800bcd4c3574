//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/model/featurize.hpp"

#include <algorithm>
#include <array>

#include "glassmol/chem/graph_algo.hpp"
#include "glassmol/chem/smiles.hpp"

namespace glassmol::model {

namespace {

constexpr std::array<int, 12> kElements = {6, 7, 8, 9, 15, 16, 17, 35, 53, 5, 14, 34};

int element_slot(int atomic_number) {
  const auto it = std::find(kElements.begin(), kElements.end(), atomic_number);
  return it == kElements.end() ? static_cast<int>(kElements.size())
                               : static_cast<int>(it - kElements.begin());
}

int bond_slot(chem::BondOrder order) {
  switch (order) {
  case chem::BondOrder::kSingle:
    return 0;
  case chem::BondOrder::kDouble:
    return 1;
  case chem::BondOrder::kTriple:
    return 2;
  case chem::BondOrder::kAromatic:
    return 3;
  }
  return 0;
}

} // namespace

bool has_heavy_atom(const chem::MolecularGraph &graph) {
  return std::any_of(graph.atoms().begin(), graph.atoms().end(),
                     [](const chem::Atom &a) { return !a.is_hydrogen(); });
}

GraphInput featurize_graph(const chem::MolecularGraph &input) {
  const chem::MolecularGraph g = chem::suppress_hydrogens(input);
  const int n = g.num_atoms();
  if (!has_heavy_atom(g))
    throw Error(ErrorCategory::kData, "FeaturizationError",
                "molecule '" + input.source_smiles() + "' has no heavy atoms");
  GraphInput out;
  out.nodes = nn::Tensor::zeros({n, kNodeFeatures});
  for (int i = 0; i < n; ++i) {
    const chem::Atom &a = g.atom(i);
    out.nodes.at(i, element_slot(a.atomic_number)) = 1.0;
    out.nodes.at(i, 13 + std::min(g.heavy_degree(i), 5)) = 1.0;
    out.nodes.at(i, 19) = a.formal_charge;
    out.nodes.at(i, 20) = a.aromatic ? 1.0 : 0.0;
    out.nodes.at(i, 21 + std::min(g.total_hydrogens(i), 3)) = 1.0;
  }
  const int m = g.num_bonds();
  out.edge_features = nn::Tensor::zeros({2 * m, kEdgeFeatures});
  for (int b = 0; b < m; ++b) {
    const chem::Bond &bond = g.bond(b);
    out.edges.source.insert(out.edges.source.end(), {bond.a, bond.b});
    out.edges.target.insert(out.edges.target.end(), {bond.b, bond.a});
    out.edge_features.at(2 * b, bond_slot(bond.order)) = 1.0;
    out.edge_features.at(2 * b + 1, bond_slot(bond.order)) = 1.0;
  }
  return out;
}

MoleculeInput featurize(std::string_view smiles) {
  return {std::string(smiles), featurize_graph(chem::parse_smiles(smiles))};
}

Batch collate(const std::vector<const MoleculeInput *> &molecules) {
  Batch b;
  b.size = static_cast<int>(molecules.size());
  int nodes = 0, edges = 0;
  for (const auto *m : molecules) {
    nodes += m->graph.num_nodes();
    edges += static_cast<int>(m->graph.edges.size());
  }
  b.nodes = nn::Tensor::zeros({nodes, kNodeFeatures});
  b.edge_features = nn::Tensor::zeros({edges, kEdgeFeatures});
  std::vector<std::string> texts;
  int node_offset = 0, edge_offset = 0;
  for (int k = 0; k < b.size; ++k) {
    const GraphInput &g = molecules[k]->graph;
    std::copy(g.nodes.data.begin(), g.nodes.data.end(),
              b.nodes.data.begin() + static_cast<std::ptrdiff_t>(node_offset) * kNodeFeatures);
    std::copy(g.edge_features.data.begin(), g.edge_features.data.end(),
              b.edge_features.data.begin() +
                  static_cast<std::ptrdiff_t>(edge_offset) * kEdgeFeatures);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      b.edges.source.push_back(g.edges.source[e] + node_offset);
      b.edges.target.push_back(g.edges.target[e] + node_offset);
    }
    b.membership.insert(b.membership.end(), g.num_nodes(), k);
    node_offset += g.num_nodes();
    edge_offset += static_cast<int>(g.edges.size());
    texts.push_back(molecules[k]->smiles);
  }
  b.tokens = nn::TokenBatch::from_sequences(texts);
  return b;
}

} // namespace glassmol::model
