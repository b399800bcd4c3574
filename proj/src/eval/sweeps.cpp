//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/eval/sweeps.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <json.hpp>

#include "glassmol/concepts/lasso.hpp"
#include "glassmol/eval/charts.hpp"
#include "glassmol/eval/metrics.hpp"
#include "glassmol/util/csv.hpp"
#include "glassmol/util/digest.hpp"

namespace glassmol::eval {

namespace {

namespace fs = std::filesystem;

std::string seed_list(const std::vector<std::uint64_t> &seeds) {
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    s += (i ? ";" : "") + std::to_string(seeds[i]);
  return s;
}

double parse_real(const std::string &value, SweepAxis axis) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size() && std::isfinite(v) && v >= 0)
      return v;
  } catch (const std::exception &) {
  }
  throw Error(ErrorCategory::kUsage, "InvalidGridValue",
              std::string(axis_name(axis)) + " grid value '" + value + "'");
}

RunSpec spec_for(const SweepOptions &options, SweepAxis axis, const std::string &value,
                 std::uint64_t seed) {
  RunSpec spec{options.base, options.selection};
  spec.train.seed = seed;
  spec.selection.seed = seed;
  switch (axis) {
  case SweepAxis::kK: {
    const double k = parse_real(value, axis);
    if (k != std::floor(k) || k < 1)
      throw Error(ErrorCategory::kUsage, "InvalidGridValue", "k grid value '" + value + "'");
    spec.selection.k = static_cast<int>(k);
    break;
  }
  case SweepAxis::kLambda:
    spec.train.lambda = parse_real(value, axis);
    break;
  case SweepAxis::kSelector:
    spec.selection.method = concepts::parse_method(value);
    break;
  case SweepAxis::kNoise:
    spec.train.noise_sigma = parse_real(value, axis);
    break;
  case SweepAxis::kBackbone:
    spec.train.model.encoder.backbone = model::parse_backbone(value);
    break;
  }
  return spec;
}

std::string opt(const std::optional<double> &v) {
  return v ? util::format_double(*v) : "";
}

} // namespace

Experiment prepare_experiment(const ExperimentPaths &paths, int jobs) {
  Experiment e;
  e.dataset = data::load_csv(paths.dataset, paths.task_id);
  if (paths.split && fs::exists(*paths.split)) {
    e.split = data::read_split(*paths.split, e.dataset);
  } else {
    e.split = data::scaffold_split(e.dataset);
    if (paths.split)
      data::write_split(*paths.split, e.dataset, e.split);
  }
  e.pool = data::compute_pool_table(e.dataset, paths.cache, jobs);
  e.inputs = data::featurize_all(e.dataset);
  e.registry = paths.registry;
  e.endpoint = concepts::EndpointConfig::from_environment();
  return e;
}

TrainMatrix training_matrix(const Experiment &experiment) {
  std::vector<desc::ConceptVector> rows;
  TrainMatrix m;
  for (std::size_t i : experiment.split.indices(data::Split::kTrain)) {
    rows.push_back(experiment.pool.raw[i]);
    m.y.push_back(experiment.dataset.records[i].label);
  }
  for (auto &v : desc::standardize(rows).first)
    m.x.push_back(std::move(v.values));
  return m;
}

concepts::ConceptSelection resolve_selection(const Experiment &experiment,
                                             const SelectionRequest &request) {
  const std::string &task = experiment.dataset.task_id;
  using concepts::SelectionMethod;
  switch (request.method) {
  case SelectionMethod::kStatic:
    return concepts::select_static(task, experiment.registry, request.k);
  case SelectionMethod::kRandom:
    return concepts::select_random(task, desc::pool_names(), request.k, request.seed);
  case SelectionMethod::kFull:
    return concepts::select_full(task);
  case SelectionMethod::kLasso: {
    const TrainMatrix m = training_matrix(experiment);
    return concepts::select_lasso(task, m.x, m.y, desc::pool_names(), request.k).selection;
  }
  case SelectionMethod::kLlm: {
    if (!experiment.endpoint)
      throw Error(ErrorCategory::kEndpoint, "EndpointUnavailable",
                  "method llm needs GLASSMOL_LLM_ENDPOINT; use method static for the "
                  "bundled offline selections");
    const auto description = concepts::find_task(task);
    if (!description)
      throw Error(ErrorCategory::kUsage, "UnknownTask",
                  "task '" + task + "' has no description in the task registry");
    return concepts::select_llm(*description, request.k, *experiment.endpoint).selection;
  }
  }
  throw Error(ErrorCategory::kInternal, "UnknownMethod", "unhandled selection method");
}

RunResult run_cached(const Experiment &experiment, const RunSpec &spec, const fs::path &dir) {
  const concepts::ConceptSelection selection = resolve_selection(experiment, spec.selection);
  TrainConfig config = spec.train;
  config.model.seed = util::mix_seed(config.seed, 1);
  const bool baseline = config.variant == Variant::kBaseline;
  const fs::path report = dir / "result.json";
  if (fs::exists(report) && fs::exists(dir / "checkpoint.json")) {
    try {
      RunResult r = RunResult::from_json(util::read_file(report));
      if (TrainConfig::from_json(r.config_json) == config &&
          (baseline || r.selection_digest == selection.digest()))
        return r;
    } catch (const Error &) {
      // Unreadable leftovers are simply recomputed.
    }
  }
  const data::CuratedDataset curated =
      data::curate(experiment.dataset, experiment.pool, selection, experiment.split);
  fs::create_directories(dir);
  if (!baseline)
    concepts::write_selection(dir / "selection.json", selection);
  return train_and_eval(curated, experiment.inputs, config, dir).result;
}

std::string_view axis_name(SweepAxis axis) noexcept {
  switch (axis) {
  case SweepAxis::kK:
    return "k";
  case SweepAxis::kLambda:
    return "lambda";
  case SweepAxis::kSelector:
    return "selector";
  case SweepAxis::kNoise:
    return "noise";
  case SweepAxis::kBackbone:
    return "backbone";
  }
  return "k";
}

SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::kK, SweepAxis::kLambda, SweepAxis::kSelector,
                      SweepAxis::kNoise, SweepAxis::kBackbone})
    if (axis_name(a) == name)
      return a;
  throw Error(ErrorCategory::kUsage, "UnknownAxis",
              "sweep axis '" + std::string(name) +
                  "' (expected k, lambda, selector, noise or backbone)");
}

std::vector<std::string> default_grid(SweepAxis axis) {
  switch (axis) {
  case SweepAxis::kK:
    return {"10", "20", "30", "40", "48"};
  case SweepAxis::kLambda:
    return {"0", "0.1", "0.5", "1", "2", "10"};
  case SweepAxis::kSelector:
    return {"static", "random", "lasso", "full"};
  case SweepAxis::kNoise:
    return {"0", "0.25", "0.5", "1"};
  case SweepAxis::kBackbone:
    return {"gnn", "sequence"};
  }
  return {};
}

PointSummary summarize(std::string value, std::vector<RunResult> runs) {
  PointSummary p;
  p.value = std::move(value);
  std::vector<double> test, valid, vmae, tmae;
  for (const RunResult &r : runs) {
    p.seeds.push_back(r.seed);
    test.push_back(r.metrics.at(data::Split::kTest).auroc);
    valid.push_back(r.metrics.at(data::Split::kValid).auroc);
    if (r.metrics.at(data::Split::kValid).concept_mae)
      vmae.push_back(*r.metrics.at(data::Split::kValid).concept_mae);
    if (r.metrics.at(data::Split::kTest).concept_mae)
      tmae.push_back(*r.metrics.at(data::Split::kTest).concept_mae);
  }
  p.test_auroc_mean = mean(test);
  p.test_auroc_std = sample_std(test);
  p.valid_auroc_mean = mean(valid);
  p.valid_auroc_std = sample_std(valid);
  if (!runs.empty() && vmae.size() == runs.size())
    p.valid_mae_mean = mean(vmae);
  if (!runs.empty() && tmae.size() == runs.size())
    p.test_mae_mean = mean(tmae);
  p.runs = std::move(runs);
  return p;
}

std::string SweepReport::to_csv() const {
  std::string out = "task_id,axis,value,n_seeds,seeds,test_auroc_mean,test_auroc_std,"
                    "valid_auroc_mean,valid_auroc_std,valid_concept_mae_mean,"
                    "test_concept_mae_mean\n";
  for (const auto &p : points)
    out += util::join_fields({task_id, std::string(axis_name(axis)), p.value,
                              std::to_string(p.seeds.size()), seed_list(p.seeds),
                              util::format_double(p.test_auroc_mean),
                              util::format_double(p.test_auroc_std),
                              util::format_double(p.valid_auroc_mean),
                              util::format_double(p.valid_auroc_std), opt(p.valid_mae_mean),
                              opt(p.test_mae_mean)}) +
           "\n";
  return out;
}

SweepReport SweepReport::from_csv(std::string_view text) {
  SweepReport r;
  std::size_t start = 0;
  bool header = true;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty())
      continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = util::split_delimited(line);
    if (f.size() != 11)
      throw Error(ErrorCategory::kData, "MalformedReport",
                  "aggregate row with " + std::to_string(f.size()) + " fields");
    r.task_id = f[0];
    r.axis = parse_axis(f[1]);
    PointSummary p;
    p.value = f[2];
    std::size_t s = 0;
    while (s < f[4].size()) {
      std::size_t e = f[4].find(';', s);
      if (e == std::string::npos)
        e = f[4].size();
      p.seeds.push_back(std::stoull(f[4].substr(s, e - s)));
      s = e + 1;
    }
    p.test_auroc_mean = util::parse_double(f[5]);
    p.test_auroc_std = util::parse_double(f[6]);
    p.valid_auroc_mean = util::parse_double(f[7]);
    p.valid_auroc_std = util::parse_double(f[8]);
    if (!f[9].empty())
      p.valid_mae_mean = util::parse_double(f[9]);
    if (!f[10].empty())
      p.test_mae_mean = util::parse_double(f[10]);
    r.points.push_back(std::move(p));
  }
  return r;
}

std::string SweepReport::summary() const {
  char buf[256];
  std::string out = "task " + task_id + ", sweep over " + std::string(axis_name(axis)) + "\n";
  out += "value\ttest_auroc(mean+-std)\tvalid_auroc(mean+-std)\tvalid_concept_mae\n";
  for (const auto &p : points) {
    std::snprintf(buf, sizeof buf, "%s\t%.4f +- %.4f\t%.4f +- %.4f\t%s\n", p.value.c_str(),
                  p.test_auroc_mean, p.test_auroc_std, p.valid_auroc_mean, p.valid_auroc_std,
                  p.valid_mae_mean ? std::to_string(*p.valid_mae_mean).c_str() : "n/a");
    out += buf;
  }
  if (axis == SweepAxis::kLambda) {
    const PointSummary *zero = nullptr, *one = nullptr;
    for (const auto &p : points) {
      if (parse_real(p.value, axis) == 0.0)
        zero = &p;
      if (parse_real(p.value, axis) == 1.0)
        one = &p;
    }
    if (zero && one && zero->valid_mae_mean && one->valid_mae_mean)
      out += std::string("directional check (valid concept MAE at lambda=0 >= lambda=1): ") +
             (*zero->valid_mae_mean >= *one->valid_mae_mean ? "holds" : "violated") + "\n";
  }
  return out;
}

SweepReport run_sweep(const Experiment &experiment, SweepAxis axis,
                      const SweepOptions &options) {
  const std::vector<std::string> grid =
      options.grid.empty() ? default_grid(axis) : options.grid;
  if (options.seeds.empty())
    throw Error(ErrorCategory::kUsage, "InvalidSeeds", "a sweep needs at least one seed");
  const fs::path root = options.out_dir / experiment.dataset.task_id / std::string(axis_name(axis));

  struct Job {
    std::size_t point;
    RunSpec spec;
    fs::path dir;
  };
  std::vector<Job> jobs;
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (std::uint64_t seed : options.seeds)
      jobs.push_back({g, spec_for(options, axis, grid[g], seed),
                      root / grid[g] / ("seed" + std::to_string(seed))});

  std::vector<RunResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        results[j] = run_cached(experiment, jobs[j].spec, jobs[j].dir);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp<int>(options.jobs, 1, static_cast<int>(jobs.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w)
      threads.emplace_back(worker);
    for (auto &t : threads)
      t.join();
  }
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);

  SweepReport report;
  report.task_id = experiment.dataset.task_id;
  report.axis = axis;
  std::string runs_csv = "value,seed,test_auroc,valid_auroc,train_auroc,valid_concept_mae,"
                         "test_concept_mae,best_epoch,epochs_run\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<RunResult> point;
    for (std::size_t j = 0; j < jobs.size(); ++j)
      if (jobs[j].point == g) {
        const RunResult &r = results[j];
        runs_csv += util::join_fields(
                        {grid[g], std::to_string(r.seed),
                         util::format_double(r.metrics.at(data::Split::kTest).auroc),
                         util::format_double(r.metrics.at(data::Split::kValid).auroc),
                         util::format_double(r.metrics.at(data::Split::kTrain).auroc),
                         opt(r.metrics.at(data::Split::kValid).concept_mae),
                         opt(r.metrics.at(data::Split::kTest).concept_mae),
                         std::to_string(r.best_epoch), std::to_string(r.epochs_run)}) +
                    "\n";
        point.push_back(r);
      }
    report.points.push_back(summarize(grid[g], std::move(point)));
  }

  std::vector<std::string> categories;
  ChartSeries test{"test AUROC", {}, {}}, valid{"valid AUROC", {}, {}};
  for (const auto &p : report.points) {
    categories.push_back(p.value);
    test.mean.push_back(p.test_auroc_mean);
    test.error.push_back(p.test_auroc_std);
    valid.mean.push_back(p.valid_auroc_mean);
    valid.error.push_back(p.valid_auroc_std);
  }
  const bool bars = axis == SweepAxis::kSelector || axis == SweepAxis::kBackbone;
  util::write_file_atomic(root / "aggregate.csv", report.to_csv());
  util::write_file_atomic(root / "runs.csv", runs_csv);
  util::write_file_atomic(root / "summary.txt", report.summary());
  util::write_file_atomic(
      root / "chart.svg",
      svg_chart(report.task_id + ": " + std::string(axis_name(axis)) + " sweep",
                std::string(axis_name(axis)), "AUROC (mean +- std over seeds)", categories,
                {test, valid}, bars));
  return report;
}

std::string export_embeddings(const model::GlassMolModel &model,
                              const data::CuratedDataset &curated,
                              const std::vector<model::MoleculeInput> &inputs,
                              data::Split split) {
  if (model.is_baseline())
    throw Error(ErrorCategory::kUsage, "UnsupportedForBaseline",
                "the baseline has no concept layer to export");
  const Evaluation ev = evaluate(model, curated, inputs, split);
  std::vector<std::string> header = {"smiles_digest", "label"};
  header.insert(header.end(), model.selection().names.begin(), model.selection().names.end());
  std::string out = util::join_fields(header) + "\n";
  for (std::size_t i = 0; i < ev.records.size(); ++i) {
    std::vector<std::string> row = {
        data::smiles_digest(curated.dataset.records[ev.records[i]].smiles),
        std::to_string(ev.labels[i])};
    for (double v : ev.concepts[i])
      row.push_back(util::format_double(v));
    out += util::join_fields(row) + "\n";
  }
  return out;
}

} // namespace glassmol::eval
