//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace glassmol::util {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

std::string sha256_file(const std::filesystem::path &path);

std::string read_file(const std::filesystem::path &path);

// Writes through a temporary sibling and renames into place.
void write_file_atomic(const std::filesystem::path &path, std::string_view bytes);

} // namespace glassmol::util
