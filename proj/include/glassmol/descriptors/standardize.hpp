//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glassmol/descriptors/pool.hpp"

namespace glassmol::desc {

// Per-column z-score parameters, estimated on the training split. Columns
// whose standard deviation is below kMinStd map to 0.
struct StandardizationStats {
  static constexpr double kMinStd = 1e-9;

  std::vector<std::string> names;
  std::vector<double> mean;
  std::vector<double> std; // population standard deviation

  double apply(std::size_t column, double raw) const;
  double invert(std::size_t column, double standardized) const;
};

StandardizationStats fit_standardization(const std::vector<ConceptVector> &vectors);

// Standardizes with the given stats, or fits them on `vectors` when absent.
std::pair<std::vector<ConceptVector>, std::shared_ptr<const StandardizationStats>>
standardize(const std::vector<ConceptVector> &vectors,
            std::shared_ptr<const StandardizationStats> stats = nullptr);

// Columns `names` of `vector`, in that order.
ConceptVector gather(const ConceptVector &vector,
                     const std::vector<std::string> &names);

} // namespace glassmol::desc
