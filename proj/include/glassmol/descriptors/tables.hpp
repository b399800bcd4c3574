//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glassmol/descriptors/pattern.hpp"

namespace glassmol::desc {

// Data directory: $GLASSMOL_DATA_DIR if set, else the source tree's data/.
std::filesystem::path data_directory();

struct CrippenRule {
  std::string type;
  FragmentPattern pattern;
  double logp = 0.0;
  double mr = 0.0;
};

// One polar-surface environment; unset fields are wildcards.
struct TpsaRule {
  int atomic_number = 0;
  std::optional<int> neighbors, hydrogens, charge, single, double_, triple,
      aromatic, in_ring3;
  double value = 0.0;
};

struct TpsaFallback {
  int atomic_number = 0;
  double base = 0.0;
  double per_neighbor = 0.0;
  double per_hydrogen = 0.0;
};

struct QedProperty {
  std::string name;
  double a, b, c, d, e, f, dmax;
  double weight;

  double desirability(double x) const;
};

struct FragmentDef {
  std::string name;
  FragmentPattern pattern;
  bool alert = false;
  std::string description;
};

class DescriptorTables {
public:
  // Loads crippen.tsv, tpsa.tsv, qed.tsv and fragments.tsv from dir/tables.
  static DescriptorTables load(const std::filesystem::path &data_dir);
  // Process-wide tables from data_directory(), loaded once.
  static const DescriptorTables &standard();

  std::vector<CrippenRule> crippen;
  std::vector<TpsaRule> tpsa;
  std::vector<TpsaFallback> tpsa_fallback;
  std::vector<QedProperty> qed;
  std::vector<FragmentDef> fragments;
  std::vector<std::string> versions; // header tags of each table

  const FragmentDef &fragment(std::string_view name) const;
};

} // namespace glassmol::desc
