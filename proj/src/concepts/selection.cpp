//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/concepts/selection.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>

#include <json.hpp>

#include "glassmol/util/csv.hpp"
#include "glassmol/util/digest.hpp"
#include "glassmol/util/random.hpp"

namespace glassmol::concepts {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kFormat = "glassmol-selection v1";

Error invalid(const std::string &message) {
  return Error(ErrorCategory::kData, "InvalidSelection", message);
}

} // namespace

std::string_view method_name(SelectionMethod method) noexcept {
  switch (method) {
  case SelectionMethod::kLlm:
    return "llm";
  case SelectionMethod::kStatic:
    return "static";
  case SelectionMethod::kRandom:
    return "random";
  case SelectionMethod::kLasso:
    return "lasso";
  case SelectionMethod::kFull:
    return "full";
  }
  return "static";
}

SelectionMethod parse_method(std::string_view name) {
  for (SelectionMethod m :
       {SelectionMethod::kLlm, SelectionMethod::kStatic,
        SelectionMethod::kRandom, SelectionMethod::kLasso,
        SelectionMethod::kFull})
    if (method_name(m) == name)
      return m;
  throw Error(ErrorCategory::kUsage, "UnknownMethod",
              "selection method '" + std::string(name) +
                  "' (expected llm, static, random, lasso or full)");
}

void ConceptSelection::validate() const {
  if (pool_version != desc::kPoolVersion)
    throw Error(ErrorCategory::kData, "PoolVersionMismatch",
                "selection for '" + task_id + "' targets " + pool_version +
                    ", current pool is " + std::string(desc::kPoolVersion));
  const int m = static_cast<int>(desc::pool().size());
  if (k < 1 || k > m)
    throw invalid("k=" + std::to_string(k) + " outside 1.." +
                  std::to_string(m));
  if (static_cast<int>(names.size()) != k)
    throw invalid("k=" + std::to_string(k) + " but " +
                  std::to_string(names.size()) + " names");
  std::vector<std::string> retired;
  std::set<std::string> seen;
  for (const std::string &n : names) {
    if (!desc::pool_index(n))
      retired.push_back(n);
    if (!seen.insert(n).second)
      throw invalid("duplicate concept '" + n + "'");
  }
  if (!retired.empty()) {
    std::string list;
    for (const auto &n : retired)
      list += (list.empty() ? "" : ", ") + n;
    throw Error(ErrorCategory::kData, "PoolVersionMismatch",
                "concepts not in " + std::string(desc::kPoolVersion) + ": " +
                    list);
  }
  if (method == SelectionMethod::kFull && names != desc::pool_names())
    throw invalid("method=full must list the entire pool in pool order");
}

std::string ConceptSelection::digest() const {
  std::string text = task_id + "\n" + std::string(method_name(method)) + "\n" +
                     pool_version + "\n";
  for (const auto &n : names)
    text += n + "\n";
  return util::sha256_hex(text);
}

std::string serialize_selection(const ConceptSelection &selection) {
  selection.validate();
  ordered_json j;
  j["format"] = kFormat;
  j["task_id"] = selection.task_id;
  j["method"] = method_name(selection.method);
  j["k"] = selection.k;
  j["pool_version"] = selection.pool_version;
  j["names"] = selection.names;
  j["provenance"] = ordered_json::object();
  for (const auto &[key, value] : selection.provenance)
    j["provenance"][key] = value;
  return j.dump(2) + "\n";
}

void write_selection(const std::filesystem::path &path,
                     const ConceptSelection &selection) {
  const std::string text = serialize_selection(selection);
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  util::write_file_atomic(path, text);
}

ConceptSelection read_selection(const std::filesystem::path &path) {
  return parse_selection(util::read_file(path), path.string());
}

ConceptSelection parse_selection(std::string_view text, const std::string &origin) {
  ConceptSelection s;
  try {
    const auto j = ordered_json::parse(text);
    if (j.at("format").get<std::string>() != kFormat)
      throw Error(ErrorCategory::kData, "MalformedSelection",
                  origin + ": unsupported format");
    s.task_id = j.at("task_id").get<std::string>();
    s.method = parse_method(j.at("method").get<std::string>());
    s.k = j.at("k").get<int>();
    s.pool_version = j.at("pool_version").get<std::string>();
    s.names = j.at("names").get<std::vector<std::string>>();
    for (const auto &[key, value] : j.at("provenance").items())
      s.provenance[key] = value.get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCategory::kData, "MalformedSelection",
                origin + ": " + e.what());
  }
  s.validate();
  return s;
}

std::filesystem::path default_registry() {
  return desc::data_directory() / "selections";
}

ConceptSelection select_static(std::string_view task_id,
                               const std::filesystem::path &registry,
                               std::optional<int> k) {
  const std::string id(task_id);
  std::filesystem::path file = registry / (id + ".json");
  if (k && std::filesystem::exists(file)) {
    ConceptSelection s = read_selection(file);
    if (s.k == *k)
      return s;
  }
  if (k)
    file = registry / (id + ".k" + std::to_string(*k) + ".json");
  if (!std::filesystem::exists(file))
    throw Error(ErrorCategory::kData, "MissingSelection",
                "no static selection " + file.string() +
                    "; run 'glassmol select' to create one");
  ConceptSelection s = read_selection(file);
  if (s.task_id != id)
    throw invalid(file.string() + " is for task '" + s.task_id + "'");
  s.method = SelectionMethod::kStatic;
  return s;
}

ConceptSelection select_full(std::string_view task_id) {
  ConceptSelection s;
  s.task_id = std::string(task_id);
  s.method = SelectionMethod::kFull;
  s.names = desc::pool_names();
  s.k = static_cast<int>(s.names.size());
  return s;
}

ConceptSelection select_random(std::string_view task_id,
                               const std::vector<std::string> &pool_names,
                               int k, std::uint64_t seed) {
  if (k < 1 || k > static_cast<int>(pool_names.size()))
    throw Error(ErrorCategory::kUsage, "InvalidK",
                "k=" + std::to_string(k) + " outside 1.." +
                    std::to_string(pool_names.size()));
  util::Rng rng(seed);
  std::vector<std::size_t> order = rng.permutation(pool_names.size());
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  ConceptSelection s;
  s.task_id = std::string(task_id);
  s.method = SelectionMethod::kRandom;
  s.k = k;
  for (std::size_t i : order)
    s.names.push_back(pool_names[i]);
  s.provenance["seed"] = std::to_string(seed);
  return s;
}

std::vector<TaskDescription> task_registry() {
  const util::Table t = util::read_table(
      desc::data_directory() / "tasks" / "descriptions.tsv", '\t', true);
  const auto id = t.column("task_id"), text = t.column("text"),
             pos = t.column("positive_label_meaning");
  if (!id || !text || !pos)
    throw Error(ErrorCategory::kData, "MissingColumn",
                "tasks/descriptions.tsv needs task_id, text, "
                "positive_label_meaning");
  std::vector<TaskDescription> out;
  for (const auto &row : t.rows)
    out.push_back({row.at(*id), row.at(*text), row.at(*pos)});
  return out;
}

std::optional<TaskDescription> find_task(std::string_view task_id) {
  for (auto &t : task_registry())
    if (t.task_id == task_id)
      return t;
  return std::nullopt;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace glassmol::concepts
