//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/nn/adam.hpp"

#include <cmath>

namespace glassmol::nn {

AdamState AdamState::for_parameters(const std::vector<Tensor *> &params) {
  AdamState s;
  for (const Tensor *p : params) {
    s.m.emplace_back(p->numel(), 0.0);
    s.v.emplace_back(p->numel(), 0.0);
  }
  return s;
}

void adam_step(const std::vector<Tensor *> &params, AdamState &state,
               const AdamConfig &config) {
  if (state.m.size() != params.size() || state.v.size() != params.size())
    throw_shape_mismatch("adam state", std::to_string(state.m.size()),
                         std::to_string(params.size()));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Tensor &p = *params[k];
    if (p.grad.size() != p.numel() || state.m[k].size() != p.numel() ||
        state.v[k].size() != p.numel())
      throw_shape_mismatch("adam parameter " + std::to_string(k),
                           p.shape_string(),
                           "grad of " + std::to_string(p.grad.size()));
  }
  const long t = state.step + 1;
  const Real c1 = 1.0 - std::pow(config.beta1, static_cast<Real>(t));
  const Real c2 = 1.0 - std::pow(config.beta2, static_cast<Real>(t));

  // Compute every update first so a divergence leaves parameters intact.
  std::vector<std::vector<Real>> next_m = state.m, next_v = state.v;
  std::vector<std::vector<Real>> next_p(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Tensor &p = *params[k];
    next_p[k] = p.data;
    for (std::size_t i = 0; i < p.numel(); ++i) {
      const Real g = p.grad[i];
      Real &m = next_m[k][i];
      Real &v = next_v[k][i];
      m = config.beta1 * m + (1.0 - config.beta1) * g;
      v = config.beta2 * v + (1.0 - config.beta2) * g * g;
      next_p[k][i] -= config.lr * (m / c1) / (std::sqrt(v / c2) + config.eps);
      if (!std::isfinite(next_p[k][i]))
        throw Error(ErrorCategory::kTraining, "DivergedTraining",
                    "non-finite parameter after Adam step " + std::to_string(t));
    }
  }
  for (std::size_t k = 0; k < params.size(); ++k)
    params[k]->data = std::move(next_p[k]);
  state.m = std::move(next_m);
  state.v = std::move(next_v);
  state.step = t;
}

} // namespace glassmol::nn
