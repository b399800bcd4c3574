//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "glassmol/cli/run_config.hpp"
#include "glassmol/error.hpp"

namespace glassmol::cli {

struct Streams {
  std::istream &in;
  std::ostream &out;
  std::ostream &err;
};

// Each command returns a process exit code and throws glassmol::Error for
// failures that map onto one; `run_command` does the mapping.
int cmd_curate(const RunConfig &config, Streams io);
int cmd_select(const RunConfig &config, Streams io);
int cmd_split(const RunConfig &config, Streams io);
int cmd_train(const RunConfig &config, Streams io);
int cmd_predict(const RunConfig &config, Streams io);
int cmd_explain(const RunConfig &config, Streams io);
int cmd_ablate(const RunConfig &config, Streams io);
int cmd_eval_report(const RunConfig &config, Streams io);

const std::vector<std::string> &command_names();

// "error: <Kind> (<category>): <message>", the machine-readable error line.
std::string format_error(const Error &e);

// Prints the snapshot, runs `command`, and turns errors into
// "error: <Kind> (<category>): <message>" on err plus the exit code.
int run_command(const std::string &command, const RunConfig &config, Streams io);

} // namespace glassmol::cli
