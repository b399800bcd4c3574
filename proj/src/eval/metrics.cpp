//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "glassmol/error.hpp"

namespace glassmol::eval {

double auroc(const std::vector<double> &scores, const std::vector<int> &labels) {
  if (scores.size() != labels.size())
    throw_shape_mismatch("auroc", std::to_string(scores.size()) + " scores",
                         std::to_string(labels.size()) + " labels");
  const std::size_t n = scores.size();
  std::size_t pos = 0;
  for (int y : labels)
    pos += y != 0;
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0)
    throw Error(ErrorCategory::kData, "SingleClass",
                "AUROC needs both classes (" + std::to_string(pos) + " positive, " +
                    std::to_string(neg) + " negative)");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of positive ranks, ties sharing their average rank (ranks 1-based).
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]])
      ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t)
      if (labels[order[t]])
        rank_sum += avg;
    i = j;
  }
  const double p = static_cast<double>(pos), q = static_cast<double>(neg);
  return (rank_sum - p * (p + 1) / 2) / (p * q);
}

double concept_mae(const std::vector<std::vector<double>> &predicted,
                   const std::vector<std::vector<double>> &target) {
  if (predicted.size() != target.size())
    throw_shape_mismatch("concept mae", std::to_string(predicted.size()),
                         std::to_string(target.size()));
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i].size() != target[i].size())
      throw_shape_mismatch("concept mae row", std::to_string(predicted[i].size()),
                           std::to_string(target[i].size()));
    for (std::size_t j = 0; j < predicted[i].size(); ++j)
      sum += std::fabs(predicted[i][j] - target[i][j]);
    count += predicted[i].size();
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

double mean(const std::vector<double> &values) {
  if (values.empty())
    return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_std(const std::vector<double> &values) {
  if (values.size() < 2)
    return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values)
    ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

} // namespace glassmol::eval
