//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/model/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "glassmol/chem/graph_algo.hpp"
#include "glassmol/chem/smiles.hpp"
#include "glassmol/descriptors/tables.hpp"

namespace glassmol::model {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

void require_concepts(const GlassMolModel &model) {
  if (model.is_baseline())
    throw Error(ErrorCategory::kUsage, "UnsupportedForBaseline",
                "the baseline model has no concept layer to explain");
}

} // namespace

std::string ContributionReport::to_text() const {
  std::string out = "# glassmol contribution report v1\n";
  out += "smiles\t" + smiles + "\n";
  out += "rank\tconcept\traw_value\tstandardized_value\tweight\tcontribution\n";
  for (const auto &e : entries)
    out += std::to_string(e.rank) + "\t" + e.name + "\t" + num(e.raw_value) + "\t" +
           num(e.standardized) + "\t" + num(e.weight) + "\t" + num(e.contribution) +
           "\n";
  out += "bias\t" + num(bias) + "\n";
  out += "logit\t" + num(logit) + "\n";
  out += "probability\t" + num(probability) + "\n";
  return out;
}

ContributionReport explain(const GlassMolModel &model, const Prediction &prediction,
                           std::string smiles) {
  require_concepts(model);
  ContributionReport r;
  r.smiles = std::move(smiles);
  const int k = model.k();
  const nn::Linear &head = model.head();
  for (int j = 0; j < k; ++j) {
    ContributionEntry e;
    e.name = model.selection().names[j];
    e.standardized = prediction.concepts.values[j];
    e.raw_value = model.stats() ? model.stats()->invert(j, e.standardized) : e.standardized;
    e.weight = head.weight.data[j];
    e.contribution = e.weight * e.standardized;
    r.entries.push_back(std::move(e));
  }
  std::stable_sort(r.entries.begin(), r.entries.end(), [](const auto &a, const auto &b) {
    return std::fabs(a.contribution) > std::fabs(b.contribution);
  });
  for (int j = 0; j < k; ++j)
    r.entries[j].rank = j + 1;
  r.bias = head.bias.data[0];
  r.logit = prediction.logit;
  r.probability = prediction.probability;
  return r;
}

ContributionReport explain(const GlassMolModel &model, std::string_view smiles) {
  require_concepts(model);
  return explain(model, model.predict(smiles), std::string(smiles));
}

AtomExplanation explain_atoms(const GlassMolModel &model, std::string_view smiles,
                              int top_n) {
  require_concepts(model);
  AtomExplanation out;
  if (top_n <= 0)
    return out;
  const ContributionReport report = explain(model, smiles);
  const chem::MolecularGraph graph = chem::suppress_hydrogens(chem::parse_smiles(smiles));
  const auto &tables = desc::DescriptorTables::standard();
  const int n = std::min<int>(top_n, static_cast<int>(report.entries.size()));
  for (int i = 0; i < n; ++i) {
    const ContributionEntry &e = report.entries[i];
    const auto idx = desc::pool_index(e.name);
    if (!idx || desc::pool()[*idx].category != desc::Category::kFragment) {
      out.global_concepts.push_back(e.name);
      continue;
    }
    AtomHighlight h{e.name, e.contribution, {}};
    for (const desc::Embedding &emb :
         desc::find_embeddings(graph, tables.fragment(e.name).pattern)) {
      std::vector<int> atoms(emb.begin(), emb.end());
      std::sort(atoms.begin(), atoms.end());
      atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
      h.atom_sets.push_back(std::move(atoms));
    }
    if (h.atom_sets.empty())
      out.unmatched.push_back(e.name);
    else
      out.highlights.push_back(std::move(h));
  }
  return out;
}

std::string AtomExplanation::to_text() const {
  std::string out;
  for (const auto &h : highlights) {
    out += "highlight\t" + h.name + "\t" + num(h.contribution);
    for (const auto &set : h.atom_sets) {
      out += "\t";
      for (std::size_t i = 0; i < set.size(); ++i)
        out += (i ? "," : "") + std::to_string(set[i]);
    }
    out += "\n";
  }
  for (const auto &g : global_concepts)
    out += "global\t" + g + "\n";
  for (const auto &u : unmatched)
    out += "unmatched\t" + u + "\n";
  return out;
}

} // namespace glassmol::model
