//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "glassmol/nn/tensor.hpp"

namespace glassmol::nn {

struct AdamConfig {
  Real lr = 1e-3;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real eps = 1e-8;
};

// First and second moments per parameter, mirroring parameter shapes.
struct AdamState {
  std::vector<std::vector<Real>> m;
  std::vector<std::vector<Real>> v;
  long step = 0;

  static AdamState for_parameters(const std::vector<Tensor *> &params);
};

// One bias-corrected Adam update from each parameter's grad. Throws
// ShapeMismatch when grads or moments disagree with the parameters, and
// Error(kTraining, "DivergedTraining") when an update leaves a non-finite
// value (parameters are left untouched in that case).
void adam_step(const std::vector<Tensor *> &params, AdamState &state,
               const AdamConfig &config);

} // namespace glassmol::nn
