//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glassmol {

// Coarse error families; each maps onto one process exit code in the CLI.
enum class ErrorCategory {
  kUsage,
  kData,
  kTraining,
  kEndpoint,
  kInternal,
};

// Base of every error the library throws. `kind()` is a stable machine
// readable class name ("UnbalancedBranch", "ShapeMismatch", ...).
class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, std::string kind, const std::string &message);

  ErrorCategory category() const noexcept { return category_; }
  const std::string &kind() const noexcept { return kind_; }

private:
  ErrorCategory category_;
  std::string kind_;
};

// 0 success, 2 usage, 3 data, 4 training divergence, 5 endpoint, 1 other.
int exit_code_for(ErrorCategory category) noexcept;

std::string_view category_name(ErrorCategory category) noexcept;

[[noreturn]] void throw_shape_mismatch(std::string_view what,
                                       std::string_view lhs,
                                       std::string_view rhs);

} // namespace glassmol
