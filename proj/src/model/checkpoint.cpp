//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/model/checkpoint.hpp"

#include <json.hpp>

#include "glassmol/util/digest.hpp"

namespace glassmol::model {

namespace {

using nlohmann::ordered_json;
constexpr const char *kFormat = "glassmol-checkpoint v1";

[[noreturn]] void malformed(const std::string &origin, const std::string &what) {
  throw Error(ErrorCategory::kData, "MalformedCheckpoint", origin + ": " + what);
}

} // namespace

std::string serialize_checkpoint(GlassMolModel &model,
                                 const std::map<std::string, std::string> &metadata) {
  ordered_json j;
  j["format"] = kFormat;
  j["variant"] = model.is_baseline() ? "baseline" : "glassmol";
  j["pool_version"] = desc::kPoolVersion;
  const ModelConfig &c = model.config();
  j["config"] = {{"backbone", backbone_name(c.encoder.backbone)},
                 {"hidden", c.encoder.hidden},
                 {"layers", c.encoder.layers},
                 {"embedding", c.encoder.embedding},
                 {"projector_hidden", c.projector_hidden},
                 {"seed", c.seed}};
  if (!model.is_baseline()) {
    j["selection"] = ordered_json::parse(concepts::serialize_selection(model.selection()));
    j["selection_digest"] = model.selection().digest();
    if (model.stats())
      j["standardization"] = {{"names", model.stats()->names},
                              {"mean", model.stats()->mean},
                              {"std", model.stats()->std}};
  }
  j["metadata"] = ordered_json::object();
  for (const auto &[k, v] : metadata)
    j["metadata"][k] = v;
  j["parameters"] = ordered_json::array();
  for (const auto &p : model.parameters())
    j["parameters"].push_back(
        {{"name", p.name}, {"shape", p.tensor->shape}, {"values", p.tensor->data}});
  return j.dump(1) + "\n";
}

void save_checkpoint(const std::filesystem::path &path, GlassMolModel &model,
                     const std::map<std::string, std::string> &metadata) {
  const std::string text = serialize_checkpoint(model, metadata);
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  util::write_file_atomic(path, text);
}

Checkpoint parse_checkpoint(std::string_view text, const std::string &origin) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    malformed(origin, e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat)
      malformed(origin, "unsupported format");
    if (j.at("pool_version").get<std::string>() != desc::kPoolVersion)
      throw Error(ErrorCategory::kData, "PoolVersionMismatch",
                  origin + ": written against pool " +
                      j.at("pool_version").get<std::string>());
    const auto &c = j.at("config");
    ModelConfig config;
    config.encoder.backbone = parse_backbone(c.at("backbone").get<std::string>());
    config.encoder.hidden = c.at("hidden").get<int>();
    config.encoder.layers = c.at("layers").get<int>();
    config.encoder.embedding = c.at("embedding").get<int>();
    config.projector_hidden = c.at("projector_hidden").get<int>();
    config.seed = c.at("seed").get<std::uint64_t>();

    const std::string variant = j.at("variant").get<std::string>();
    std::optional<GlassMolModel> model;
    if (variant == "baseline") {
      model = GlassMolModel::make_baseline(config);
    } else if (variant == "glassmol") {
      auto selection = concepts::parse_selection(j.at("selection").dump(), origin);
      if (selection.digest() != j.at("selection_digest").get<std::string>())
        malformed(origin, "selection digest does not match the embedded selection");
      std::shared_ptr<const desc::StandardizationStats> stats;
      if (j.contains("standardization")) {
        auto s = std::make_shared<desc::StandardizationStats>();
        s->names = j["standardization"].at("names").get<std::vector<std::string>>();
        s->mean = j["standardization"].at("mean").get<std::vector<double>>();
        s->std = j["standardization"].at("std").get<std::vector<double>>();
        if (s->mean.size() != s->names.size() || s->std.size() != s->names.size())
          malformed(origin, "standardization columns disagree");
        stats = std::move(s);
      }
      model.emplace(config, std::move(selection), std::move(stats));
    } else {
      malformed(origin, "unknown variant '" + variant + "'");
    }

    const auto &params = j.at("parameters");
    nn::ParameterList expected = model->parameters();
    if (params.size() != expected.size())
      malformed(origin, "expected " + std::to_string(expected.size()) +
                            " parameter tensors, found " + std::to_string(params.size()));
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const auto &p = params[i];
      if (p.at("name").get<std::string>() != expected[i].name)
        malformed(origin, "parameter " + std::to_string(i) + " is '" +
                              p.at("name").get<std::string>() + "', expected '" +
                              expected[i].name + "'");
      const auto shape = p.at("shape").get<std::vector<int>>();
      auto values = p.at("values").get<std::vector<double>>();
      if (shape != expected[i].tensor->shape || values.size() != expected[i].tensor->numel())
        throw_shape_mismatch(expected[i].name, expected[i].tensor->shape_string(),
                             std::to_string(values.size()) + " values");
      expected[i].tensor->data = std::move(values);
    }
    Checkpoint out{std::move(*model), {}};
    for (const auto &[k, v] : j.at("metadata").items())
      out.metadata[k] = v.get<std::string>();
    return out;
  } catch (const nlohmann::json::exception &e) {
    malformed(origin, e.what());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
  return parse_checkpoint(util::read_file(path), path.string());
}

} // namespace glassmol::model
