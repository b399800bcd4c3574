//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/descriptors/standardize.hpp"

#include <cmath>

namespace glassmol::desc {

namespace {

std::string join(const std::vector<std::string> &names) {
  std::string out = "[";
  for (std::size_t i = 0; i < names.size(); ++i)
    out += (i ? "," : "") + names[i];
  return out + "]";
}

void require_names(const ConceptVector &v, const std::vector<std::string> &names) {
  if (v.names != names || v.values.size() != names.size())
    throw_shape_mismatch("concept vector columns", join(v.names), join(names));
}

} // namespace

double StandardizationStats::apply(std::size_t column, double raw) const {
  if (std[column] < kMinStd)
    return 0.0;
  return (raw - mean[column]) / std[column];
}

double StandardizationStats::invert(std::size_t column,
                                    double standardized) const {
  if (std[column] < kMinStd)
    return mean[column];
  return standardized * std[column] + mean[column];
}

StandardizationStats fit_standardization(const std::vector<ConceptVector> &vectors) {
  StandardizationStats s;
  if (vectors.empty())
    return s;
  s.names = vectors.front().names;
  const std::size_t m = s.names.size();
  s.mean.assign(m, 0.0);
  s.std.assign(m, 0.0);
  for (const ConceptVector &v : vectors) {
    require_names(v, s.names);
    for (std::size_t j = 0; j < m; ++j)
      s.mean[j] += v.values[j];
  }
  const double n = static_cast<double>(vectors.size());
  for (double &x : s.mean)
    x /= n;
  for (const ConceptVector &v : vectors) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = v.values[j] - s.mean[j];
      s.std[j] += d * d;
    }
  }
  for (double &x : s.std)
    x = std::sqrt(x / n);
  return s;
}

std::pair<std::vector<ConceptVector>, std::shared_ptr<const StandardizationStats>>
standardize(const std::vector<ConceptVector> &vectors,
            std::shared_ptr<const StandardizationStats> stats) {
  if (!stats)
    stats = std::make_shared<const StandardizationStats>(fit_standardization(vectors));
  std::vector<ConceptVector> out;
  out.reserve(vectors.size());
  for (const ConceptVector &v : vectors) {
    require_names(v, stats->names);
    ConceptVector z{v.values, v.names, true, stats};
    for (std::size_t j = 0; j < z.values.size(); ++j)
      z.values[j] = stats->apply(j, v.values[j]);
    out.push_back(std::move(z));
  }
  return {std::move(out), stats};
}

ConceptVector gather(const ConceptVector &vector,
                     const std::vector<std::string> &names) {
  ConceptVector out;
  out.standardized = vector.standardized;
  out.stats = vector.stats;
  for (const std::string &name : names) {
    std::size_t j = 0;
    while (j < vector.names.size() && vector.names[j] != name)
      ++j;
    if (j == vector.names.size())
      throw_shape_mismatch("gather", join(vector.names), name);
    out.values.push_back(vector.values[j]);
    out.names.push_back(name);
  }
  return out;
}

} // namespace glassmol::desc
