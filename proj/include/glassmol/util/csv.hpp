//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace glassmol::util {

// Splits one record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_delimited(std::string_view line, char sep = ',');

// Quotes a field when it contains the separator, a quote or a newline.
std::string escape_field(std::string_view field, char sep = ',');

std::string join_fields(const std::vector<std::string> &fields, char sep = ',');

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers; // 1-based source line of each row

  std::optional<std::size_t> column(std::string_view name) const;
};

// Reads a header-first delimited file. Blank lines are skipped, as are lines
// starting with '#' when skip_comments is set. Throws Error(kData) on IO
// failure.
Table read_table(const std::filesystem::path &path, char sep = ',',
                 bool skip_comments = false);

// First line of a versioned data table: "# glassmol-table <name> v<n>".
std::string read_table_version(const std::filesystem::path &path);

// Format used for every persisted real: shortest round-trip representation.
std::string format_double(double value);

double parse_double(std::string_view text);

} // namespace glassmol::util
