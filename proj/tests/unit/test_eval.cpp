//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>

#include "glassmol/eval/charts.hpp"
#include "glassmol/eval/metrics.hpp"
#include "glassmol/eval/sweeps.hpp"
#include "glassmol/model/checkpoint.hpp"
#include "glassmol/util/csv.hpp"
#include "glassmol/util/digest.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace glassmol;
using namespace glassmol::eval;
using Catch::Matchers::WithinAbs;

namespace {

std::string kind_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  return "none";
}

// First `n` rows of the bundled DILI proxy under the task id "dili".
std::filesystem::path dili_subset(const testing::TempDir &dir, std::size_t n) {
  std::ifstream in(desc::data_directory() / "tasks" / "dili.csv");
  const auto path = dir / "dili.csv";
  std::ofstream out(path);
  std::string line;
  for (std::size_t i = 0; i <= n && std::getline(in, line); ++i)
    out << line << "\n";
  return path;
}

TrainConfig tiny_train(std::uint64_t seed = 0) {
  TrainConfig c;
  c.model.encoder.hidden = 16;
  c.model.encoder.layers = 2;
  c.model.projector_hidden = 16;
  c.max_epochs = 6;
  c.patience = 3;
  c.batch_size = 16;
  c.lr = 3e-3;
  c.seed = seed;
  return c;
}

} // namespace

TEST_CASE("auroc examples", "[eval][auroc]") {
  CHECK(auroc({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}) == 1.0);
  CHECK(auroc({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1}) == 0.0);
  CHECK(auroc({0.5, 0.5, 0.5, 0.5}, {0, 1, 0, 1}) == 0.5);
  CHECK(auroc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}) == 0.75);
  CHECK(kind_of([] { auroc({0.1, 0.2}, {1, 1}); }) == "SingleClass");
  CHECK(kind_of([] { auroc({0.1, 0.2}, {1}); }) == "ShapeMismatch");
}

TEST_CASE("auroc matches the pair-counting oracle", "[eval][auroc]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 199);
    std::vector<double> s(n);
    std::vector<int> y(n);
    const int levels = 1 + static_cast<int>(rng() % 12); // coarse levels force ties
    for (int i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % levels) / levels;
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 0;
    y[1] = 1;
    const double a = auroc(s, y);
    CHECK(std::fabs(a - testing::oracle::pair_count_auroc(s, y)) < 1e-12);
    // Strictly increasing transforms leave it unchanged.
    std::vector<double> e(n), f(n);
    for (int i = 0; i < n; ++i) {
      e[i] = std::exp(s[i]);
      f[i] = 3.0 * s[i] - 7.0;
    }
    CHECK(auroc(e, y) == a);
    CHECK(auroc(f, y) == a);
  }
}

TEST_CASE("aggregation statistics", "[eval][metrics]") {
  CHECK(mean({1, 2, 3, 4}) == 2.5);
  CHECK_THAT(sample_std({1, 2, 3, 4}), WithinAbs(std::sqrt(5.0 / 3.0), 1e-15));
  CHECK(sample_std({2}) == 0.0);
  CHECK(concept_mae({{1, 2}, {3, 4}}, {{1, 0}, {3, 5}}) == 0.75);
  CHECK(kind_of([] { concept_mae({{1}}, {{1, 2}}); }) == "ShapeMismatch");
}

TEST_CASE("train config snapshot round trip", "[eval][config]") {
  TrainConfig c = tiny_train(9);
  c.variant = Variant::kBaseline;
  c.lambda = 0.5;
  c.noise_sigma = 0.25;
  c.model.encoder.backbone = model::Backbone::kSequence;
  TrainConfig back = TrainConfig::from_json(c.to_json());
  c.model.seed = util::mix_seed(9, 1);
  CHECK(back == c);
  CHECK(kind_of([] { TrainConfig::from_json("{}"); }) == "MalformedConfig");
  CHECK(kind_of([] { parse_variant("blackbox"); }) == "UnknownVariant");
}

TEST_CASE("train and evaluate: contract, determinism, baseline", "[eval][train]") {
  testing::TempDir dir("train");
  ExperimentPaths paths;
  paths.dataset = dili_subset(dir, 90);
  const Experiment exp = prepare_experiment(paths);
  CHECK(exp.dataset.task_id == "dili");
  const auto selection = resolve_selection(exp, {concepts::SelectionMethod::kStatic, 10, 0});
  const auto curated = data::curate(exp.dataset, exp.pool, selection, exp.split);

  const TrainedRun a = train_and_eval(curated, exp.inputs, tiny_train(), dir / "a");
  const RunResult &r = a.result;
  CHECK(r.task_id == "dili");
  CHECK(r.k == 10);
  CHECK(r.selection_method == "static");
  CHECK(r.metrics.size() == 3);
  for (const auto &[split, m] : r.metrics) {
    CHECK(m.auroc >= 0.0);
    CHECK(m.auroc <= 1.0);
    CHECK(m.concept_mae.has_value());
  }
  CHECK(r.epochs_run >= r.best_epoch);
  CHECK(r.best_epoch >= 1);
  CHECK(r.history.size() == static_cast<std::size_t>(r.epochs_run));
  // With lambda > 0 the training concept loss goes down over the run.
  CHECK(r.history.back().concept_loss < r.history.front().concept_loss);
  CHECK(RunResult::from_json(r.to_json()).to_json() == r.to_json());

  // Best-validation parameters are the ones kept.
  CHECK(split_metrics(a.model, curated, exp.inputs, data::Split::kValid).auroc ==
        r.history[r.best_epoch - 1].valid_auroc);

  // Same config and seed: byte-identical checkpoint and report.
  train_and_eval(curated, exp.inputs, tiny_train(), dir / "b");
  CHECK(util::read_file(dir / "a" / "checkpoint.json") ==
        util::read_file(dir / "b" / "checkpoint.json"));
  CHECK(util::read_file(dir / "a" / "result.json") == util::read_file(dir / "b" / "result.json"));
  const auto loaded = model::load_checkpoint(dir / "a" / "checkpoint.json");
  CHECK(split_metrics(loaded.model, curated, exp.inputs, data::Split::kTest).auroc ==
        r.metrics.at(data::Split::kTest).auroc);

  TrainConfig base_cfg = tiny_train();
  base_cfg.variant = Variant::kBaseline;
  const RunResult b = train_and_eval(curated, exp.inputs, base_cfg).result;
  for (const auto &[split, m] : b.metrics)
    CHECK_FALSE(m.concept_mae.has_value());
  CHECK(b.k == 0);
  CHECK(b.lambda == 0.0);

  TrainConfig wild = tiny_train();
  wild.lr = 1e308;
  CHECK(kind_of([&] { train_and_eval(curated, exp.inputs, wild); }) == "DivergedTraining");
  TrainConfig bad = tiny_train();
  bad.batch_size = 0;
  CHECK(kind_of([&] { train_and_eval(curated, exp.inputs, bad); }) == "InvalidConfig");

  // Noise sigma 0 is the unperturbed run, bit for bit.
  TrainConfig quiet = tiny_train();
  quiet.noise_sigma = 0.0;
  CHECK(train_and_eval(curated, exp.inputs, quiet).result.to_json() == r.to_json());
}

TEST_CASE("selection resolution", "[eval][select]") {
  testing::TempDir dir("resolve");
  ExperimentPaths paths;
  paths.dataset = dili_subset(dir, 80);
  paths.split = dir / "split.csv";
  const Experiment exp = prepare_experiment(paths);
  CHECK(std::filesystem::exists(dir / "split.csv"));
  CHECK(prepare_experiment(paths).split.tags == exp.split.tags);

  using concepts::SelectionMethod;
  CHECK(resolve_selection(exp, {SelectionMethod::kFull, 5, 0}).k == 48);
  const auto r1 = resolve_selection(exp, {SelectionMethod::kRandom, 12, 1});
  const auto r2 = resolve_selection(exp, {SelectionMethod::kRandom, 12, 2});
  CHECK(r1.k == 12);
  CHECK(r1.names != r2.names);
  CHECK(r1.provenance.at("seed") == "1");
  const auto lasso = resolve_selection(exp, {SelectionMethod::kLasso, 8, 0});
  CHECK(lasso.k == 8);
  CHECK(lasso.method == SelectionMethod::kLasso);
  Experiment offline = exp;
  offline.endpoint.reset();
  CHECK(kind_of([&] { resolve_selection(offline, {SelectionMethod::kLlm, 10, 0}); }) ==
        "EndpointUnavailable");
}

TEST_CASE("sweeps: grid, seeds, aggregation, resumption", "[eval][sweep]") {
  testing::TempDir dir("sweep");
  ExperimentPaths paths;
  paths.dataset = dili_subset(dir, 90);
  const Experiment exp = prepare_experiment(paths);
  SweepOptions opt;
  opt.base = tiny_train();
  opt.base.max_epochs = 4;
  opt.selection = {concepts::SelectionMethod::kStatic, 10, 0};
  opt.grid = {"0", "1"};
  opt.seeds = {0, 1};
  opt.out_dir = dir / "out";
  const SweepReport rep = run_sweep(exp, SweepAxis::kLambda, opt);
  REQUIRE(rep.points.size() == 2);
  CHECK(rep.points[0].value == "0");
  CHECK(rep.points[1].value == "1");
  CHECK(rep.points[0].seeds == rep.points[1].seeds);
  CHECK(rep.points[0].seeds == std::vector<std::uint64_t>{0, 1});
  // lambda = 0 leaves the bottleneck unsupervised.
  CHECK(*rep.points[0].valid_mae_mean >= *rep.points[1].valid_mae_mean);
  CHECK(rep.summary().find("holds") != std::string::npos);

  const auto root = opt.out_dir / "dili" / "lambda";
  const std::string csv = util::read_file(root / "aggregate.csv");
  CHECK(csv == rep.to_csv());
  CHECK(SweepReport::from_csv(csv).to_csv() == csv);
  CHECK(util::read_file(root / "chart.svg").rfind("<svg", 0) == 0);

  // Aggregates agree with the persisted per-seed reports.
  for (const auto &p : rep.points) {
    std::vector<double> test;
    for (auto s : p.seeds)
      test.push_back(RunResult::from_json(util::read_file(root / p.value / ("seed" + std::to_string(s)) /
                                                          "result.json"))
                         .metrics.at(data::Split::kTest)
                         .auroc);
    CHECK(mean(test) == p.test_auroc_mean);
    CHECK(sample_std(test) == p.test_auroc_std);
  }

  // Re-running skips finished points: reports are reused untouched.
  const auto stamp = std::filesystem::last_write_time(root / "1" / "seed1" / "checkpoint.json");
  const SweepReport again = run_sweep(exp, SweepAxis::kLambda, opt);
  CHECK(again.to_csv() == rep.to_csv());
  CHECK(std::filesystem::last_write_time(root / "1" / "seed1" / "checkpoint.json") == stamp);

  // Selector sweep records its methods verbatim; the full pool has k = M.
  SweepOptions sel = opt;
  sel.grid = {"static", "full"};
  sel.seeds = {0};
  const SweepReport s = run_sweep(exp, SweepAxis::kSelector, sel);
  CHECK(s.points[0].value == "static");
  CHECK(s.points[1].runs[0].k == 48);
  CHECK(s.points[1].runs[0].selection_method == "full");

  CHECK(kind_of([&] {
          SweepOptions bad = opt;
          bad.grid = {"-1"};
          run_sweep(exp, SweepAxis::kNoise, bad);
        }) == "InvalidGridValue");
  CHECK(kind_of([] { parse_axis("temperature"); }) == "UnknownAxis");
  CHECK(default_grid(SweepAxis::kK) == std::vector<std::string>{"10", "20", "30", "40", "48"});
}

TEST_CASE("embedding export", "[eval][export]") {
  testing::TempDir dir("export");
  ExperimentPaths paths;
  paths.dataset = dili_subset(dir, 60);
  const Experiment exp = prepare_experiment(paths);
  const auto sel = resolve_selection(exp, {concepts::SelectionMethod::kStatic, 10, 0});
  const auto curated = data::curate(exp.dataset, exp.pool, sel, exp.split);
  model::ModelConfig cfg;
  cfg.encoder.hidden = 16;
  const model::GlassMolModel m(cfg, sel, curated.stats);
  const std::string text = export_embeddings(m, curated, exp.inputs, data::Split::kTest);
  std::ofstream(dir / "emb.csv") << text;
  const util::Table t = util::read_table(dir / "emb.csv");
  REQUIRE(t.rows.size() == exp.split.count(data::Split::kTest));
  CHECK(t.header.size() == 2 + 10);
  const auto test_idx = exp.split.indices(data::Split::kTest);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto p = m.predict(exp.inputs[test_idx[i]]);
    CHECK(t.rows[i][0] == data::smiles_digest(exp.dataset.records[test_idx[i]].smiles));
    for (int j = 0; j < 10; ++j)
      CHECK(std::fabs(util::parse_double(t.rows[i][2 + j]) - p.concepts.values[j]) < 1e-9);
  }
  CHECK(kind_of([&] {
          export_embeddings(model::GlassMolModel::make_baseline(cfg), curated, exp.inputs,
                            data::Split::kTest);
        }) == "UnsupportedForBaseline");
}

TEST_CASE("svg chart emitter", "[eval][chart]") {
  const std::string line =
      svg_chart("t <1>", "x", "y", {"a", "b"}, {{"s", {0.5, 0.7}, {0.1, 0.0}}});
  CHECK(line.rfind("<svg", 0) == 0);
  CHECK(line.find("<polyline") != std::string::npos);
  CHECK(line.find("t &lt;1&gt;") != std::string::npos);
  const std::string bars = svg_chart("t", "x", "y", {"a"}, {{"s", {0.5}, {}}}, true);
  CHECK(bars.find("<polyline") == std::string::npos);
  CHECK(bars.find("</svg>") != std::string::npos);
}
