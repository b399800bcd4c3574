//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/error.hpp"

namespace glassmol {

Error::Error(ErrorCategory category, std::string kind,
             const std::string &message)
    : std::runtime_error(kind + ": " + message), category_(category),
      kind_(std::move(kind)) {}

int exit_code_for(ErrorCategory category) noexcept {
  switch (category) {
  case ErrorCategory::kUsage:
    return 2;
  case ErrorCategory::kData:
    return 3;
  case ErrorCategory::kTraining:
    return 4;
  case ErrorCategory::kEndpoint:
    return 5;
  case ErrorCategory::kInternal:
    break;
  }
  return 1;
}

std::string_view category_name(ErrorCategory category) noexcept {
  switch (category) {
  case ErrorCategory::kUsage:
    return "usage";
  case ErrorCategory::kData:
    return "data";
  case ErrorCategory::kTraining:
    return "training";
  case ErrorCategory::kEndpoint:
    return "endpoint";
  case ErrorCategory::kInternal:
    break;
  }
  return "internal";
}

void throw_shape_mismatch(std::string_view what, std::string_view lhs,
                          std::string_view rhs) {
  throw Error(ErrorCategory::kData, "ShapeMismatch",
              std::string(what) + ": " + std::string(lhs) + " vs " +
                  std::string(rhs));
}

} // namespace glassmol
