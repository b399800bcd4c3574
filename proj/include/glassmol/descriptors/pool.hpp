//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glassmol/chem/molecule.hpp"
#include "glassmol/descriptors/tables.hpp"
#include "glassmol/error.hpp"

namespace glassmol::desc {

// Bumped whenever names, order or definitions of the pool change.
inline constexpr std::string_view kPoolVersion = "glassmol-pool-v1";

enum class Category {
  kTopological,
  kFragment,
  kMolecular,
  kSurface,
  kHeterocycle,
  kLipinski,
  kQed,
};

std::string_view category_name(Category category) noexcept;

struct ConceptDescriptor {
  std::string name;
  Category category;
  std::string description;
};

// The fixed, ordered concept pool (M = 48).
const std::vector<ConceptDescriptor> &pool();
std::vector<std::string> pool_names();
std::optional<int> pool_index(std::string_view name);

struct StandardizationStats;

struct ConceptVector {
  std::vector<double> values;
  std::vector<std::string> names;
  bool standardized = false;
  std::shared_ptr<const StandardizationStats> stats; // set when standardized

  std::size_t size() const noexcept { return values.size(); }
};

class DescriptorFailure : public Error {
public:
  DescriptorFailure(std::string descriptor, std::string cause);

  const std::string &descriptor() const noexcept { return descriptor_; }
  const std::string &cause() const noexcept { return cause_; }

private:
  std::string descriptor_;
  std::string cause_;
};

// Raw pool values in pool order. Hydrogen atoms written as graph nodes are
// folded into their heavy atoms first.
ConceptVector compute_pool(const chem::MolecularGraph &graph,
                           const DescriptorTables &tables =
                               DescriptorTables::standard());

// Individual descriptors, exposed for tests and explanations. All take a
// hydrogen-suppressed graph unless noted.
double molecular_weight(const chem::MolecularGraph &graph);
long long wiener_index(const chem::MolecularGraph &graph);
int rotatable_bonds(const chem::MolecularGraph &graph,
                    const DescriptorTables &tables);
double tpsa(const chem::MolecularGraph &graph, const DescriptorTables &tables);
int aromatic_ring_count(const chem::MolecularGraph &graph);

struct CrippenValues {
  double logp = 0.0;
  double mr = 0.0;
  std::vector<std::string> atom_types; // over the hydrogen-expanded graph
};
CrippenValues crippen(const chem::MolecularGraph &graph,
                      const DescriptorTables &tables);

int match_fragment(const chem::MolecularGraph &graph,
                   const FragmentPattern &pattern);

} // namespace glassmol::desc
