//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/descriptors/tables.hpp"

#include <cmath>
#include <cstdlib>

#include "glassmol/chem/elements.hpp"
#include "glassmol/util/csv.hpp"

namespace glassmol::desc {

namespace fs = std::filesystem;

fs::path data_directory() {
  if (const char *env = std::getenv("GLASSMOL_DATA_DIR"); env && *env)
    return env;
  return GLASSMOL_DEFAULT_DATA_DIR;
}

double QedProperty::desirability(double x) const {
  const double exp1 = 1.0 + std::exp(-(x - c + d / 2.0) / e);
  const double exp2 = 1.0 + std::exp(-(x - c - d / 2.0) / f);
  return (a + b / exp1 * (1.0 - 1.0 / exp2)) / dmax;
}

namespace {

[[noreturn]] void bad_row(const fs::path &path, std::size_t line,
                          const std::string &why) {
  throw Error(ErrorCategory::kData, "BadTable",
              path.string() + ":" + std::to_string(line) + ": " + why);
}

util::Table load_table(const fs::path &path,
                       const std::vector<std::string> &header,
                       std::vector<std::string> &versions) {
  versions.push_back(util::read_table_version(path));
  util::Table t = util::read_table(path, '\t', true);
  if (t.header != header)
    bad_row(path, 0, "unexpected header");
  return t;
}

std::optional<int> wildcard_int(const std::string &s) {
  if (s == "*")
    return std::nullopt;
  return static_cast<int>(util::parse_double(s));
}

int element_number(const fs::path &path, std::size_t line,
                   const std::string &symbol) {
  const auto *el = chem::find_element(symbol);
  if (!el)
    bad_row(path, line, "unknown element " + symbol);
  return el->atomic_number;
}

} // namespace

DescriptorTables DescriptorTables::load(const fs::path &data_dir) {
  DescriptorTables t;
  const fs::path dir = data_dir / "tables";

  {
    const fs::path path = dir / "crippen.tsv";
    auto table = load_table(path, {"type", "pattern", "logp", "mr"}, t.versions);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      auto &row = table.rows[r];
      if (row.size() < 3 || row.size() > 4)
        bad_row(path, table.line_numbers[r], "expected 3 or 4 fields");
      CrippenRule rule{row[0], FragmentPattern::parse(row[1]),
                       util::parse_double(row[2]), 0.0};
      if (row.size() == 4 && !row[3].empty())
        rule.mr = util::parse_double(row[3]);
      t.crippen.push_back(std::move(rule));
    }
  }

  {
    const fs::path path = dir / "tpsa.tsv";
    auto table = load_table(path,
                            {"kind", "element", "nbrs", "h", "charge", "single",
                             "double", "triple", "aromatic", "ring3", "value"},
                            t.versions);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      auto &row = table.rows[r];
      const std::size_t line = table.line_numbers[r];
      if (row[0] == "rule" && row.size() == 11) {
        TpsaRule rule;
        rule.atomic_number = element_number(path, line, row[1]);
        rule.neighbors = wildcard_int(row[2]);
        rule.hydrogens = wildcard_int(row[3]);
        rule.charge = wildcard_int(row[4]);
        rule.single = wildcard_int(row[5]);
        rule.double_ = wildcard_int(row[6]);
        rule.triple = wildcard_int(row[7]);
        rule.aromatic = wildcard_int(row[8]);
        rule.in_ring3 = wildcard_int(row[9]);
        rule.value = util::parse_double(row[10]);
        t.tpsa.push_back(rule);
      } else if (row[0] == "fallback" && row.size() == 5) {
        t.tpsa_fallback.push_back({element_number(path, line, row[1]),
                                   util::parse_double(row[2]),
                                   util::parse_double(row[3]),
                                   util::parse_double(row[4])});
      } else {
        bad_row(path, line, "unknown row kind or field count");
      }
    }
  }

  {
    const fs::path path = dir / "qed.tsv";
    auto table = load_table(
        path, {"property", "a", "b", "c", "d", "e", "f", "dmax", "weight"},
        t.versions);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      auto &row = table.rows[r];
      if (row.size() != 9)
        bad_row(path, table.line_numbers[r], "expected 9 fields");
      QedProperty p{row[0], 0, 0, 0, 0, 0, 0, 0, 0};
      double *fields[] = {&p.a, &p.b, &p.c, &p.d, &p.e, &p.f, &p.dmax, &p.weight};
      for (int k = 0; k < 8; ++k)
        *fields[k] = util::parse_double(row[k + 1]);
      t.qed.push_back(p);
    }
  }

  {
    const fs::path path = dir / "fragments.tsv";
    auto table = load_table(path, {"name", "pattern", "alert", "description"},
                            t.versions);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      auto &row = table.rows[r];
      if (row.size() != 4)
        bad_row(path, table.line_numbers[r], "expected 4 fields");
      t.fragments.push_back(
          {row[0], FragmentPattern::parse(row[1]), row[2] == "1", row[3]});
    }
  }
  return t;
}

const DescriptorTables &DescriptorTables::standard() {
  static const DescriptorTables tables = load(data_directory());
  return tables;
}

const FragmentDef &DescriptorTables::fragment(std::string_view name) const {
  for (const FragmentDef &f : fragments) {
    if (f.name == name)
      return f;
  }
  throw Error(ErrorCategory::kData, "BadTable",
              "fragment table has no entry '" + std::string(name) + "'");
}

} // namespace glassmol::desc
