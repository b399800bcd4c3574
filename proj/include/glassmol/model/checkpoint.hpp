//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "glassmol/model/glassmol_model.hpp"

namespace glassmol::model {

// JSON document with every named parameter tensor, the model config, the
// embedded selection (plus its digest), the pool version and the concept
// standardization stats. Doubles are written in shortest round-trip form,
// so a reload is bit-identical.
struct Checkpoint {
  GlassMolModel model;
  std::map<std::string, std::string> metadata;
};

std::string serialize_checkpoint(GlassMolModel &model,
                                 const std::map<std::string, std::string> &metadata = {});
void save_checkpoint(const std::filesystem::path &path, GlassMolModel &model,
                     const std::map<std::string, std::string> &metadata = {});

// MalformedCheckpoint on bad structure, PoolVersionMismatch when written
// against another pool, ShapeMismatch when a tensor disagrees with the
// config.
Checkpoint parse_checkpoint(std::string_view text, const std::string &origin);
Checkpoint load_checkpoint(const std::filesystem::path &path);

} // namespace glassmol::model
