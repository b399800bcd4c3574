//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Command-line entry point. Flags only collect overrides; resolution and
// the commands themselves live in the glassmol_cli library.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glassmol/cli/commands.hpp"
#include "glassmol/error.hpp"

namespace {

using glassmol::cli::RunConfig;

struct FlagSpec {
  const char *key;
  const char *flags; // CLI11 name list
  const char *help;
};

const std::map<std::string, FlagSpec> &flag_table() {
  static const std::map<std::string, FlagSpec> table = [] {
    const std::vector<FlagSpec> specs = {
        {"task_id", "--task", "task id (default: dataset file stem)"},
        {"dataset", "--dataset", "task CSV with smiles,label columns"},
        {"cache", "--cache", "concept pool cache CSV"},
        {"selections", "--selections", "static selection registry directory"},
        {"output", "-o,--output", "output directory"},
        {"split", "--split", "split CSV (reused when present, created otherwise)"},
        {"method", "--method", "selection method: static, random, lasso, full, llm"},
        {"k", "-k,--k", "number of concepts"},
        {"variant", "--variant", "glassmol or baseline"},
        {"backbone", "--backbone", "gnn or sequence"},
        {"lambda", "--lambda", "concept loss weight"},
        {"seeds", "--seed,--seeds", "comma-separated seeds"},
        {"epochs", "--epochs", "maximum epochs"},
        {"patience", "--patience", "early stopping patience (epochs)"},
        {"batch_size", "--batch-size", "minibatch size"},
        {"lr", "--lr", "Adam learning rate"},
        {"hidden", "--hidden", "encoder width"},
        {"layers", "--layers", "encoder depth"},
        {"embedding", "--embedding", "byte embedding width (sequence backbone)"},
        {"projector_hidden", "--projector-hidden", "concept projector hidden width"},
        {"noise", "--noise", "std of standardized noise on training concepts"},
        {"jobs", "-j,--jobs", "worker threads"},
        {"endpoint", "--endpoint", "chat-completion URL"},
        {"llm_model", "--llm-model", "model name sent to the endpoint"},
        {"timeout", "--timeout", "endpoint request timeout in seconds"},
        {"axis", "--axis", "sweep axis: k, lambda, selector, noise, backbone"},
        {"grid", "--grid", "comma-separated grid values (default: axis grid)"},
        {"checkpoint", "--checkpoint", "checkpoint.json of a trained run"},
        {"input", "--input", "SMILES file, '-' for standard input"},
        {"smiles", "--smiles", "molecule to explain"},
        {"atoms", "--atoms", "also print the top-N concept atom highlights"},
    };
    std::map<std::string, FlagSpec> out;
    for (const FlagSpec &s : specs)
      out.emplace(s.key, s);
    return out;
  }();
  return table;
}

const std::vector<std::string> kModelKeys = {
    "task_id", "dataset",  "cache",   "split",      "selections", "output",
    "method",  "k",        "variant", "backbone",   "lambda",     "seeds",
    "epochs",  "patience", "batch_size", "lr",      "hidden",     "layers",
    "embedding", "projector_hidden", "noise", "jobs", "endpoint", "llm_model", "timeout"};

std::vector<std::string> keys_for(const std::string &command) {
  if (command == "curate")
    return {"task_id", "dataset", "cache", "output", "jobs"};
  if (command == "select")
    return {"task_id", "dataset", "cache", "split", "selections", "output", "method", "k",
            "seeds", "jobs", "endpoint", "llm_model", "timeout"};
  if (command == "split")
    return {"task_id", "dataset", "split", "output", "seeds"};
  if (command == "predict")
    return {"checkpoint", "input"};
  if (command == "explain")
    return {"checkpoint", "smiles", "atoms"};
  if (command == "eval-report")
    return {"output"};
  std::vector<std::string> keys = kModelKeys;
  if (command == "ablate") {
    keys.push_back("axis");
    keys.push_back("grid");
  }
  return keys;
}

const std::map<std::string, std::string> kAbout = {
    {"curate", "compute (or reuse) the concept pool cache and quarantine report"},
    {"select", "produce a concept selection file"},
    {"split", "write the scaffold split of a dataset"},
    {"train", "train one run per seed and write checkpoints and reports"},
    {"predict", "score SMILES with a checkpoint, CSV on standard output"},
    {"explain", "print the concept contribution report of one molecule"},
    {"ablate", "run a sweep over one axis"},
    {"eval-report", "aggregate the results under an output directory"},
};

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"glassmol: concept bottleneck models for molecular property prediction"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  app.add_option("-c,--config", config_file,
                 "JSON config file; precedence is flags > config file > environment > defaults");

  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::App *, std::vector<std::pair<CLI::Option *, std::string>>>> commands;
  for (const std::string &name : glassmol::cli::command_names()) {
    CLI::App *sub = app.add_subcommand(name, kAbout.at(name));
    std::vector<std::pair<CLI::Option *, std::string>> options;
    for (const std::string &key : keys_for(name)) {
      const FlagSpec &spec = flag_table().at(key);
      options.emplace_back(sub->add_option(spec.flags, values[key], spec.help), key);
    }
    commands.emplace_back(sub, std::move(options));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto &[sub, options] : commands) {
    if (!sub->parsed())
      continue;
    std::map<std::string, std::string> flags;
    for (const auto &[option, key] : options)
      if (option->count() > 0)
        flags[key] = values[key];
    glassmol::cli::Streams io{std::cin, std::cout, std::cerr};
    RunConfig config;
    try {
      config = glassmol::cli::resolve_config(
          flags, config_file.empty() ? std::nullopt
                                     : std::optional<std::filesystem::path>(config_file));
    } catch (const glassmol::Error &e) {
      std::cerr << glassmol::cli::format_error(e) << "\n";
      return glassmol::exit_code_for(e.category());
    }
    return glassmol::cli::run_command(sub->get_name(), config, io);
  }
  return 2;
}
