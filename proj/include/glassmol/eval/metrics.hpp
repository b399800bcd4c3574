//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

namespace glassmol::eval {

// Mann-Whitney AUROC with average ranks for tied scores. Throws
// SingleClass when only one label value is present, ShapeMismatch on a
// length mismatch.
double auroc(const std::vector<double> &scores, const std::vector<int> &labels);

// Mean absolute error over all entries of equally shaped row sets.
double concept_mae(const std::vector<std::vector<double>> &predicted,
                   const std::vector<std::vector<double>> &target);

double mean(const std::vector<double> &values);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_std(const std::vector<double> &values);

} // namespace glassmol::eval
