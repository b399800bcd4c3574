//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/cli/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include <json.hpp>

#include "glassmol/concepts/selection.hpp"
#include "glassmol/error.hpp"
#include "glassmol/util/csv.hpp"
#include "glassmol/util/digest.hpp"

namespace glassmol::cli {
namespace {

using json = nlohmann::json;

[[noreturn]] void bad_value(const std::string &key, const std::string &value,
                            const std::string &origin, const std::string &why) {
  throw Error(ErrorCategory::kUsage, "InvalidConfigValue",
              key + "='" + value + "' from " + origin + ": " + why);
}

std::string trim(std::string s) {
  auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), space));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), space).base(), s.end());
  return s;
}

template <typename Int> Int parse_integer(const std::string &key, const std::string &raw,
                                          const std::string &origin) {
  const std::string v = trim(raw);
  Int out{};
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size() || v.empty())
    bad_value(key, raw, origin, "expected an integer");
  return out;
}

double parse_real(const std::string &key, const std::string &raw, const std::string &origin) {
  double v = 0.0;
  try {
    v = util::parse_double(trim(raw));
  } catch (const Error &) {
    bad_value(key, raw, origin, "expected a number");
  }
  if (!std::isfinite(v))
    bad_value(key, raw, origin, "must be finite");
  return v;
}

std::vector<std::string> parse_list(const std::string &raw) {
  std::vector<std::string> out;
  for (const std::string &part : util::split_delimited(raw, ','))
    if (!trim(part).empty())
      out.push_back(trim(part));
  return out;
}

struct Field {
  std::string key;
  std::function<void(RunConfig &, const std::string &, const std::string &)> set;
  std::function<json(const RunConfig &)> get; // null: not snapshotted
};

template <typename T> Field text(std::string key, T RunConfig::*member) {
  return {key, [member](RunConfig &c, const std::string &v, const std::string &) { c.*member = v; },
          [member](const RunConfig &c) { return json(c.*member); }};
}

Field integer(std::string key, int RunConfig::*member, int min) {
  return {key,
          [key, member, min](RunConfig &c, const std::string &v, const std::string &origin) {
            const int x = parse_integer<int>(key, v, origin);
            if (x < min)
              bad_value(key, v, origin, "must be at least " + std::to_string(min));
            c.*member = x;
          },
          [member](const RunConfig &c) { return json(c.*member); }};
}

Field real(std::string key, double RunConfig::*member) {
  return {key,
          [key, member](RunConfig &c, const std::string &v, const std::string &origin) {
            c.*member = parse_real(key, v, origin);
          },
          [member](const RunConfig &c) { return json(c.*member); }};
}

const std::vector<Field> &fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f = {
        text("task_id", &RunConfig::task_id),
        text("dataset", &RunConfig::dataset),
        text("cache", &RunConfig::cache),
        text("selections", &RunConfig::selections),
        text("output", &RunConfig::output),
        text("split", &RunConfig::split),
        text("method", &RunConfig::method),
        integer("k", &RunConfig::k, 1),
        text("variant", &RunConfig::variant),
        text("backbone", &RunConfig::backbone),
        real("lambda", &RunConfig::lambda),
        integer("epochs", &RunConfig::epochs, 1),
        integer("patience", &RunConfig::patience, 1),
        integer("batch_size", &RunConfig::batch_size, 1),
        real("lr", &RunConfig::lr),
        integer("hidden", &RunConfig::hidden, 1),
        integer("layers", &RunConfig::layers, 1),
        integer("embedding", &RunConfig::embedding, 1),
        integer("projector_hidden", &RunConfig::projector_hidden, 1),
        real("noise", &RunConfig::noise),
        integer("jobs", &RunConfig::jobs, 1),
        text("endpoint", &RunConfig::endpoint),
        text("llm_model", &RunConfig::llm_model),
        real("timeout", &RunConfig::timeout),
        text("axis", &RunConfig::axis),
        text("checkpoint", &RunConfig::checkpoint),
        text("input", &RunConfig::input),
        text("smiles", &RunConfig::smiles),
        integer("atoms", &RunConfig::atoms, 0),
    };
    f.push_back({"key",
                 [](RunConfig &c, const std::string &v, const std::string &) { c.key = v; },
                 nullptr});
    f.push_back({"seeds",
                 [](RunConfig &c, const std::string &v, const std::string &origin) {
                   std::vector<std::uint64_t> seeds;
                   for (const std::string &s : parse_list(v))
                     seeds.push_back(parse_integer<std::uint64_t>("seeds", s, origin));
                   if (seeds.empty())
                     bad_value("seeds", v, origin, "needs at least one seed");
                   c.seeds = std::move(seeds);
                 },
                 [](const RunConfig &c) { return json(c.seeds); }});
    f.push_back({"grid",
                 [](RunConfig &c, const std::string &v, const std::string &) {
                   c.grid = parse_list(v);
                 },
                 [](const RunConfig &c) { return json(c.grid); }});
    return f;
  }();
  return table;
}

const Field *find_field(const std::string &key) {
  for (const Field &f : fields())
    if (f.key == key)
      return &f;
  return nullptr;
}

} // namespace

RunConfig::RunConfig() : selections(concepts::default_registry().string()) {}

const std::vector<std::string> &RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Field &f : fields())
      out.push_back(f.key);
    return out;
  }();
  return names;
}

std::string RunConfig::environment_name(const std::string &key) {
  if (key == "endpoint")
    return "GLASSMOL_LLM_ENDPOINT";
  if (key == "key")
    return "GLASSMOL_LLM_KEY";
  if (key == "llm_model")
    return "GLASSMOL_LLM_MODEL";
  std::string name = "GLASSMOL_";
  for (char c : key)
    name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

std::string RunConfig::snapshot() const {
  json j = json::object();
  for (const Field &f : fields())
    if (f.get)
      j[f.key] = f.get(*this);
  return j.dump();
}

void RunConfig::apply(const std::map<std::string, std::string> &values,
                      const std::string &origin) {
  for (const auto &[key, value] : values) {
    const Field *f = find_field(key);
    if (!f)
      throw Error(ErrorCategory::kUsage, "UnknownConfigKey",
                  "'" + key + "' from " + origin + " is not a configuration key");
    f->set(*this, value, origin);
  }
}

std::optional<std::string> process_environment(const std::string &name) {
  if (const char *v = std::getenv(name.c_str()))
    return std::string(v);
  return std::nullopt;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorCategory::kUsage, "MissingConfigFile", path.string() + " does not exist");
  json j;
  try {
    j = json::parse(util::read_file(path));
  } catch (const json::exception &e) {
    throw Error(ErrorCategory::kUsage, "MalformedConfigFile", path.string() + ": " + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCategory::kUsage, "MalformedConfigFile",
                path.string() + ": expected a JSON object");
  std::map<std::string, std::string> out;
  for (const auto &[key, value] : j.items()) {
    if (value.is_string()) {
      out[key] = value.get<std::string>();
    } else if (value.is_array()) {
      std::vector<std::string> parts;
      for (const json &v : value)
        parts.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      out[key] = util::join_fields(parts);
    } else {
      out[key] = value.dump();
    }
  }
  return out;
}

RunConfig resolve_config(const std::map<std::string, std::string> &flags,
                         const std::optional<std::filesystem::path> &config_file,
                         const EnvironmentLookup &environment) {
  RunConfig c;
  std::map<std::string, std::string> env;
  for (const std::string &key : RunConfig::keys())
    if (auto v = environment(RunConfig::environment_name(key)))
      env[key] = *v;
  c.apply(env, "environment");
  if (config_file)
    c.apply(read_config_file(*config_file), config_file->string());
  c.apply(flags, "command line");
  return c;
}

} // namespace glassmol::cli
