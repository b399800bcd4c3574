//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string_view>

namespace glassmol::chem {

struct ElementInfo {
  std::string_view symbol;
  int atomic_number;
  double atomic_weight; // standard atomic weight, g/mol
};

// nullptr when the symbol is not a known element.
const ElementInfo *find_element(std::string_view symbol) noexcept;

// Precondition: 1 <= z <= max_atomic_number().
const ElementInfo &element(int atomic_number) noexcept;

int max_atomic_number() noexcept;

} // namespace glassmol::chem
