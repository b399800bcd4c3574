//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "glassmol/concepts/selection.hpp"

namespace glassmol::concepts {

struct LassoOptions {
  int path_length = 30;
  double min_ratio = 1e-3; // lambda_min = min_ratio * lambda_max
  double tolerance = 1e-6; // max coefficient change per sweep
  int max_sweeps = 20000;  // per path point
};

struct LassoPathPoint {
  double lambda = 0.0;
  double intercept = 0.0;
  std::vector<double> coef;
  int nonzero = 0;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective; // after each full sweep
};

// L1-penalized logistic regression,
//   (1/n) sum_i log(1 + exp(-s_i eta_i)) + lambda * |beta|_1,
// with an unpenalized intercept. Each coordinate update tries a proximal
// Newton step and falls back to the majorizer step under the global
// curvature bound 1/4 whenever that does better, so the objective can only
// go down.
std::vector<LassoPathPoint>
fit_lasso_path(const std::vector<std::vector<double>> &x, // n rows of p
               const std::vector<int> &y, const LassoOptions &options = {});

struct LassoSelection {
  ConceptSelection selection;
  std::vector<LassoPathPoint> path;
  int chosen_point = -1; // -1 when degenerate
};

// Picks the first path point with >= k nonzero coefficients (or the last
// point) and returns the top k names by |coefficient|, ties in pool order.
// `x` holds standardized columns named `names`. Throws DegenerateLabels.
LassoSelection select_lasso(std::string_view task_id,
                            const std::vector<std::vector<double>> &x,
                            const std::vector<int> &y,
                            const std::vector<std::string> &names, int k,
                            const LassoOptions &options = {});

} // namespace glassmol::concepts
