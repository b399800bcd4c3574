//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace glassmol::cli {

// Every knob a command can read. Resolution layers, lowest first:
// built-in defaults, environment (GLASSMOL_<KEY>, plus GLASSMOL_LLM_ENDPOINT
// / GLASSMOL_LLM_KEY / GLASSMOL_LLM_MODEL for the endpoint), the --config
// JSON file, then command-line flags.
struct RunConfig {
  std::string task_id;     // empty: dataset file stem
  std::string dataset;     // task CSV
  std::string cache;       // concept cache CSV, optional except for curate
  std::string selections;  // static selection registry directory
  std::string output = "glassmol-out";
  std::string split;       // split CSV to reuse or create, optional
  std::string method = "static";
  int k = 40;
  std::string variant = "glassmol";
  std::string backbone = "gnn";
  double lambda = 1.0;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  int epochs = 200;
  int patience = 20;
  int batch_size = 64;
  double lr = 1e-3;
  int hidden = 128;
  int layers = 3;
  int embedding = 64;
  int projector_hidden = 256;
  double noise = 0.0;
  int jobs = 1;
  std::string endpoint;
  std::string key; // never part of the snapshot
  std::string llm_model = "gpt-4";
  double timeout = 60.0;
  std::string axis = "lambda";
  std::vector<std::string> grid; // empty: the axis default
  std::string checkpoint;
  std::string input = "-"; // predict source, "-" is stdin
  std::string smiles;
  int atoms = 0; // explain: top-N atom highlights, 0 disables

  RunConfig();

  // Resolved snapshot, keys sorted; feeding it back through --config
  // reproduces the run.
  std::string snapshot() const;

  // Applies string-valued overrides by key. Throws Error(kUsage) on an
  // unknown key (UnknownConfigKey) or unparsable value (InvalidConfigValue).
  void apply(const std::map<std::string, std::string> &values, const std::string &origin);

  static const std::vector<std::string> &keys();
  static std::string environment_name(const std::string &key);
};

using EnvironmentLookup = std::function<std::optional<std::string>(const std::string &)>;

// Process environment lookup.
std::optional<std::string> process_environment(const std::string &name);

// Reads a JSON object; scalars and arrays become override strings (arrays
// are joined with commas).
std::map<std::string, std::string> read_config_file(const std::filesystem::path &path);

RunConfig resolve_config(const std::map<std::string, std::string> &flags,
                         const std::optional<std::filesystem::path> &config_file,
                         const EnvironmentLookup &environment = process_environment);

} // namespace glassmol::cli
