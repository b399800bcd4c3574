//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/eval/train.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "glassmol/eval/metrics.hpp"
#include "glassmol/model/checkpoint.hpp"
#include "glassmol/nn/adam.hpp"
#include "glassmol/util/digest.hpp"
#include "glassmol/util/random.hpp"

namespace glassmol::eval {

namespace {

using nlohmann::ordered_json;

constexpr int kEvalBatch = 256;

ordered_json metrics_json(const SplitMetrics &m) {
  ordered_json j;
  j["auroc"] = m.auroc;
  j["concept_mae"] = m.concept_mae ? ordered_json(*m.concept_mae) : ordered_json(nullptr);
  return j;
}

} // namespace

std::string_view variant_name(Variant variant) noexcept {
  return variant == Variant::kGlassMol ? "glassmol" : "baseline";
}

Variant parse_variant(std::string_view name) {
  if (name == "glassmol")
    return Variant::kGlassMol;
  if (name == "baseline")
    return Variant::kBaseline;
  throw Error(ErrorCategory::kUsage, "UnknownVariant",
              "variant '" + std::string(name) + "' (expected glassmol or baseline)");
}

std::string TrainConfig::to_json() const {
  ordered_json j;
  j["variant"] = variant_name(variant);
  j["backbone"] = model::backbone_name(model.encoder.backbone);
  j["hidden"] = model.encoder.hidden;
  j["layers"] = model.encoder.layers;
  j["embedding"] = model.encoder.embedding;
  j["projector_hidden"] = model.projector_hidden;
  j["lambda"] = lambda;
  j["max_epochs"] = max_epochs;
  j["patience"] = patience;
  j["batch_size"] = batch_size;
  j["lr"] = lr;
  j["seed"] = seed;
  j["noise_sigma"] = noise_sigma;
  return j.dump(2);
}

TrainConfig TrainConfig::from_json(std::string_view text) {
  TrainConfig c;
  try {
    const auto j = ordered_json::parse(text);
    c.variant = parse_variant(j.at("variant").get<std::string>());
    c.model.encoder.backbone = model::parse_backbone(j.at("backbone").get<std::string>());
    c.model.encoder.hidden = j.at("hidden").get<int>();
    c.model.encoder.layers = j.at("layers").get<int>();
    c.model.encoder.embedding = j.at("embedding").get<int>();
    c.model.projector_hidden = j.at("projector_hidden").get<int>();
    c.lambda = j.at("lambda").get<double>();
    c.max_epochs = j.at("max_epochs").get<int>();
    c.patience = j.at("patience").get<int>();
    c.batch_size = j.at("batch_size").get<int>();
    c.lr = j.at("lr").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.noise_sigma = j.at("noise_sigma").get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCategory::kUsage, "MalformedConfig", e.what());
  }
  c.model.seed = util::mix_seed(c.seed, 1);
  return c;
}

std::string RunResult::to_json() const {
  ordered_json j;
  j["format"] = "glassmol-run v1";
  j["task_id"] = task_id;
  j["variant"] = variant_name(variant);
  j["backbone"] = model::backbone_name(backbone);
  j["seed"] = seed;
  j["selection_method"] = selection_method;
  j["k"] = k;
  j["lambda"] = lambda;
  j["selection_digest"] = selection_digest;
  for (const auto &[split, m] : metrics)
    j["metrics"][std::string(data::split_name(split))] = metrics_json(m);
  j["best_epoch"] = best_epoch;
  j["epochs_run"] = epochs_run;
  j["config"] = ordered_json::parse(config_json);
  j["history"] = ordered_json::array();
  for (const auto &h : history)
    j["history"].push_back({{"epoch", h.epoch},
                            {"task_loss", h.task_loss},
                            {"concept_loss", h.concept_loss},
                            {"valid_auroc", h.valid_auroc}});
  return j.dump(2) + "\n";
}

RunResult RunResult::from_json(std::string_view text) {
  RunResult r;
  try {
    const auto j = ordered_json::parse(text);
    r.task_id = j.at("task_id").get<std::string>();
    r.variant = parse_variant(j.at("variant").get<std::string>());
    r.backbone = model::parse_backbone(j.at("backbone").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.selection_method = j.at("selection_method").get<std::string>();
    r.k = j.at("k").get<int>();
    r.lambda = j.at("lambda").get<double>();
    r.selection_digest = j.at("selection_digest").get<std::string>();
    for (const auto &[name, m] : j.at("metrics").items()) {
      SplitMetrics sm;
      sm.auroc = m.at("auroc").get<double>();
      if (!m.at("concept_mae").is_null())
        sm.concept_mae = m.at("concept_mae").get<double>();
      r.metrics[data::parse_split(name)] = sm;
    }
    r.best_epoch = j.at("best_epoch").get<int>();
    r.epochs_run = j.at("epochs_run").get<int>();
    r.config_json = j.at("config").dump(2);
    for (const auto &h : j.at("history"))
      r.history.push_back({h.at("epoch").get<int>(), h.at("task_loss").get<double>(),
                           h.at("concept_loss").get<double>(),
                           h.at("valid_auroc").get<double>()});
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCategory::kData, "MalformedReport", e.what());
  }
  return r;
}

Evaluation evaluate(const model::GlassMolModel &model, const data::CuratedDataset &curated,
                    const std::vector<model::MoleculeInput> &inputs, data::Split split) {
  Evaluation ev;
  for (const auto &b : data::make_batches(curated, inputs, split, kEvalBatch)) {
    nn::Tape tape(false);
    const auto out = model.forward(tape, b.batch);
    const nn::Tensor &logits = out.logits.value();
    for (int i = 0; i < b.batch.size; ++i) {
      ev.logits.push_back(logits.data[i]);
      ev.labels.push_back(static_cast<int>(b.labels.data[i]));
      ev.records.push_back(b.records[i]);
      if (!model.is_baseline()) {
        const nn::Tensor &c = out.concepts.value();
        ev.concepts.emplace_back(c.data.begin() + static_cast<std::ptrdiff_t>(i) * c.cols(),
                                 c.data.begin() + static_cast<std::ptrdiff_t>(i + 1) * c.cols());
      }
    }
  }
  return ev;
}

SplitMetrics split_metrics(const model::GlassMolModel &model,
                           const data::CuratedDataset &curated,
                           const std::vector<model::MoleculeInput> &inputs, data::Split split) {
  const Evaluation ev = evaluate(model, curated, inputs, split);
  SplitMetrics m;
  m.auroc = auroc(ev.logits, ev.labels);
  if (!model.is_baseline()) {
    std::vector<std::vector<double>> target;
    for (std::size_t r : ev.records)
      target.push_back(curated.concepts[r]);
    m.concept_mae = concept_mae(ev.concepts, target);
  }
  return m;
}

TrainedRun train_and_eval(const data::CuratedDataset &input_curated,
                          const std::vector<model::MoleculeInput> &inputs,
                          const TrainConfig &input_config,
                          const std::optional<std::filesystem::path> &out_dir) {
  const auto start = std::chrono::steady_clock::now();
  TrainConfig config = input_config;
  config.model.seed = util::mix_seed(config.seed, 1);
  if (config.max_epochs < 1 || config.patience < 1 || config.batch_size < 1 || !(config.lr > 0))
    throw Error(ErrorCategory::kUsage, "InvalidConfig",
                "max_epochs, patience, batch_size and lr must be positive");

  // Clean concepts stay the evaluation target; noise only touches training.
  const data::CuratedDataset train_view =
      config.noise_sigma > 0
          ? data::perturb_concepts(input_curated, config.noise_sigma, config.seed)
          : input_curated;
  const data::CuratedDataset &curated = input_curated;

  model::GlassMolModel net =
      config.variant == Variant::kBaseline
          ? model::GlassMolModel::make_baseline(config.model)
          : model::GlassMolModel(config.model, curated.selection, curated.stats);
  const double lambda = config.variant == Variant::kBaseline ? 0.0 : config.lambda;

  std::vector<nn::Tensor *> params;
  for (auto &p : net.parameters())
    params.push_back(p.tensor);
  nn::AdamState adam = nn::AdamState::for_parameters(params);
  nn::AdamConfig adam_config;
  adam_config.lr = config.lr;

  RunResult result;
  result.task_id = curated.dataset.task_id;
  result.variant = config.variant;
  result.backbone = config.model.encoder.backbone;
  result.seed = config.seed;
  result.lambda = lambda;
  if (config.variant == Variant::kGlassMol) {
    result.selection_method = std::string(concepts::method_name(curated.selection.method));
    result.k = curated.selection.k;
    result.selection_digest = curated.selection.digest();
  }
  result.config_json = config.to_json();

  std::vector<std::vector<double>> best = {};
  double best_auroc = -1.0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    EpochLog log;
    log.epoch = epoch;
    const auto batches = data::make_batches(train_view, inputs, data::Split::kTrain,
                                            config.batch_size,
                                            util::mix_seed(config.seed, 1000 + epoch));
    for (const auto &b : batches) {
      nn::Tape tape;
      const model::JointLoss loss = model::joint_loss(
          tape, net, b.batch, b.labels,
          config.variant == Variant::kBaseline ? nullptr : &b.concepts, lambda);
      if (!std::isfinite(loss.breakdown.total))
        throw Error(ErrorCategory::kTraining, "DivergedTraining",
                    "non-finite loss at epoch " + std::to_string(epoch));
      tape.backward(loss.total);
      tape.gradients_to(params);
      nn::adam_step(params, adam, adam_config);
      log.task_loss += loss.breakdown.task_loss / static_cast<double>(batches.size());
      log.concept_loss += loss.breakdown.concept_loss / static_cast<double>(batches.size());
    }
    const Evaluation valid = evaluate(net, curated, inputs, data::Split::kValid);
    log.valid_auroc = auroc(valid.logits, valid.labels);
    result.history.push_back(log);
    result.epochs_run = epoch;
    if (log.valid_auroc > best_auroc) {
      best_auroc = log.valid_auroc;
      result.best_epoch = epoch;
      best.clear();
      for (const nn::Tensor *p : params)
        best.push_back(p->data);
    } else if (epoch - result.best_epoch >= config.patience) {
      break;
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i)
    params[i]->data = best[i];

  for (data::Split s : {data::Split::kTrain, data::Split::kValid, data::Split::kTest})
    result.metrics[s] = split_metrics(net, curated, inputs, s);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    model::save_checkpoint(*out_dir / "checkpoint.json", net,
                           {{"task_id", result.task_id},
                            {"best_epoch", std::to_string(result.best_epoch)},
                            {"dataset_digest", curated.dataset.digest}});
    util::write_file_atomic(*out_dir / "result.json", result.to_json());
    util::write_file_atomic(*out_dir / "timing.json",
                            "{\"wall_seconds\": " + std::to_string(result.wall_seconds) + "}\n");
  }
  return {std::move(result), std::move(net)};
}

} // namespace glassmol::eval
