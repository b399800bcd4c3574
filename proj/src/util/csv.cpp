//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/util/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "glassmol/error.hpp"

namespace glassmol::util {

std::vector<std::string> split_delimited(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == sep) {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string escape_field(std::string_view field, char sep) {
  if (field.find_first_of(std::string{sep, '"', '\n', '\r'}) ==
      std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"')
      out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join_fields(const std::vector<std::string> &fields, char sep) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i)
      out += sep;
    out += escape_field(fields[i], sep);
  }
  return out;
}

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name)
      return i;
  }
  return std::nullopt;
}

Table read_table(const std::filesystem::path &path, char sep,
                 bool skip_comments) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCategory::kData, "FileUnreadable",
                "cannot open " + path.string());
  Table t;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || (skip_comments && line.front() == '#'))
      continue;
    auto fields = split_delimited(line, sep);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(number);
  }
  if (!have_header)
    throw Error(ErrorCategory::kData, "EmptyFile",
                path.string() + " has no header row");
  return t;
}

std::string read_table_version(const std::filesystem::path &path) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line))
    throw Error(ErrorCategory::kData, "FileUnreadable",
                "cannot open " + path.string());
  constexpr std::string_view kMagic = "# glassmol-table ";
  if (line.rfind(kMagic, 0) != 0)
    throw Error(ErrorCategory::kData, "TableVersion",
                path.string() + " lacks a '# glassmol-table' version line");
  return line.substr(kMagic.size());
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && text.front() == ' ')
    text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ')
    text.remove_suffix(1);
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() ||
      res.ptr != text.data() + text.size())
    throw Error(ErrorCategory::kData, "BadNumber",
                "not a number: '" + std::string(text) + "'");
  return v;
}

} // namespace glassmol::util
