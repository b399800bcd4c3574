//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "glassmol/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "glassmol/concepts/llm_client.hpp"
#include "glassmol/data/curate.hpp"
#include "glassmol/error.hpp"
#include "glassmol/eval/metrics.hpp"
#include "glassmol/eval/sweeps.hpp"
#include "glassmol/model/checkpoint.hpp"
#include "glassmol/model/explain.hpp"
#include "glassmol/util/csv.hpp"
#include "glassmol/util/digest.hpp"

namespace glassmol::cli {
namespace fs = std::filesystem;
namespace {

const std::string &require(const std::string &value, const std::string &key) {
  if (value.empty())
    throw Error(ErrorCategory::kUsage, "MissingArgument", "--" + key + " is required");
  return value;
}

std::string task_of(const RunConfig &c) {
  if (!c.task_id.empty())
    return c.task_id;
  return fs::path(require(c.dataset, "dataset")).stem().string();
}

std::optional<concepts::EndpointConfig> endpoint_of(const RunConfig &c) {
  if (c.endpoint.empty())
    return std::nullopt;
  concepts::EndpointConfig e;
  e.endpoint = c.endpoint;
  e.key = c.key;
  e.model = c.llm_model;
  e.timeout_seconds = c.timeout;
  return e;
}

eval::Experiment experiment_of(const RunConfig &c) {
  eval::ExperimentPaths paths;
  paths.dataset = require(c.dataset, "dataset");
  paths.task_id = c.task_id;
  if (!c.cache.empty())
    paths.cache = c.cache;
  if (!c.split.empty())
    paths.split = c.split;
  paths.registry = c.selections;
  eval::Experiment e = eval::prepare_experiment(paths, c.jobs);
  e.endpoint = endpoint_of(c);
  return e;
}

eval::TrainConfig train_config_of(const RunConfig &c) {
  eval::TrainConfig t;
  t.variant = eval::parse_variant(c.variant);
  t.model.encoder.backbone = model::parse_backbone(c.backbone);
  t.model.encoder.hidden = c.hidden;
  t.model.encoder.layers = c.layers;
  t.model.encoder.embedding = c.embedding;
  t.model.projector_hidden = c.projector_hidden;
  t.lambda = c.lambda;
  t.max_epochs = c.epochs;
  t.patience = c.patience;
  t.batch_size = c.batch_size;
  t.lr = c.lr;
  t.noise_sigma = c.noise;
  return t;
}

eval::SelectionRequest selection_of(const RunConfig &c) {
  return {concepts::parse_method(c.method), c.k, 0};
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Writes only when the bytes differ, so a repeated run leaves mtimes alone.
void write_if_changed(const fs::path &path, const std::string &bytes) {
  if (fs::exists(path) && util::read_file(path) == bytes)
    return;
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  util::write_file_atomic(path, bytes);
}

void print_selection(std::ostream &out, const concepts::ConceptSelection &s) {
  out << "task " << s.task_id << ", method " << concepts::method_name(s.method) << ", k "
      << s.k << ", digest " << s.digest() << "\n";
  for (const auto &[key, value] : s.provenance)
    out << "provenance " << key << ": " << value << "\n";
  out << "concepts";
  for (const std::string &n : s.names)
    out << " " << n;
  out << "\n";
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; the first error wins.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> &fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t threads = std::min<std::size_t>(std::max(jobs, 1), n);
  for (std::size_t t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

// Directory name of one configuration's runs, one subdirectory per seed.
std::string run_group(const RunConfig &c) {
  std::string name = c.variant + "_" + c.backbone;
  if (c.variant == "glassmol")
    name += "_" + c.method + "_k" + std::to_string(c.k) + "_lambda" +
            util::format_double(c.lambda) + "_noise" + util::format_double(c.noise);
  return name;
}

} // namespace

int cmd_curate(const RunConfig &c, Streams io) {
  const std::string task = task_of(c);
  const fs::path cache =
      c.cache.empty() ? fs::path(c.output) / (task + ".pool.csv") : fs::path(c.cache);
  const data::Dataset ds = data::load_csv(require(c.dataset, "dataset"), task);
  io.out << "dataset " << c.dataset << ": " << ds.records.size() << " records, "
         << ds.quarantine.size() << " quarantined, digest " << ds.digest << "\n";
  if (cache.has_parent_path())
    fs::create_directories(cache.parent_path());
  const std::size_t before = data::descriptor_computations();
  const data::PoolTable pool = data::compute_pool_table(ds, cache, c.jobs);
  if (pool.cache_hit)
    io.out << "cache " << cache.string() << ": up to date, nothing recomputed\n";
  else
    io.out << "cache " << cache.string() << ": computed "
           << data::descriptor_computations() - before << " molecules\n";
  fs::path report = cache;
  report.replace_extension(".quarantine.csv");
  write_if_changed(report, data::quarantine_report(ds));
  for (const auto &q : ds.quarantine)
    io.out << "quarantined line " << q.line << " (" << q.smiles << "): " << q.reason << "\n";
  io.out << "quarantine report " << report.string() << "\n";
  return 0;
}

int cmd_select(const RunConfig &c, Streams io) {
  const std::string task = task_of(c);
  const auto method = concepts::parse_method(c.method);
  const fs::path path = fs::path(c.output) / (task + ".k" + std::to_string(c.k) + ".json");
  concepts::ConceptSelection selection;
  if (method == concepts::SelectionMethod::kLlm) {
    const auto endpoint = endpoint_of(c);
    if (!endpoint)
      throw Error(ErrorCategory::kEndpoint, "EndpointUnavailable",
                  "no chat-completion endpoint configured; set GLASSMOL_LLM_ENDPOINT (and "
                  "GLASSMOL_LLM_KEY) or pass --endpoint, or use --method static for the "
                  "bundled offline selections");
    const auto description = concepts::find_task(task);
    if (!description)
      throw Error(ErrorCategory::kUsage, "UnknownTask",
                  "task '" + task + "' has no description in the task registry");
    const concepts::LlmSelection result = concepts::select_llm(*description, c.k, *endpoint);
    fs::create_directories(c.output);
    concepts::persist_llm_selection(path, result);
    selection = result.selection;
    io.out << "requests " << result.requests << "\n";
  } else {
    switch (method) {
    case concepts::SelectionMethod::kStatic:
      selection = concepts::select_static(task, c.selections, c.k);
      break;
    case concepts::SelectionMethod::kRandom:
      selection = concepts::select_random(task, desc::pool_names(), c.k, c.seeds.front());
      break;
    case concepts::SelectionMethod::kFull:
      selection = concepts::select_full(task);
      break;
    default:
      selection = eval::resolve_selection(experiment_of(c), selection_of(c));
    }
    fs::create_directories(c.output);
    write_if_changed(path, concepts::serialize_selection(selection));
  }
  print_selection(io.out, selection);
  io.out << "selection file " << path.string() << "\n";
  return 0;
}

int cmd_split(const RunConfig &c, Streams io) {
  const std::string task = task_of(c);
  const data::Dataset ds = data::load_csv(require(c.dataset, "dataset"), task);
  const data::SplitAssignment split = data::scaffold_split(ds, {0.8, 0.1, 0.1}, c.seeds.front());
  const fs::path path =
      c.split.empty() ? fs::path(c.output) / (task + ".split.csv") : fs::path(c.split);
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  data::write_split(path, ds, split);
  const std::set<std::string> groups(split.scaffold_keys.begin(), split.scaffold_keys.end());
  io.out << "task " << task << ": " << groups.size() << " scaffold groups; train "
         << split.count(data::Split::kTrain) << ", valid " << split.count(data::Split::kValid)
         << ", test " << split.count(data::Split::kTest) << "\n";
  io.out << "split file " << path.string() << "\n";
  return 0;
}

int cmd_train(const RunConfig &c, Streams io) {
  const eval::Experiment exp = experiment_of(c);
  const fs::path group = fs::path(c.output) / exp.dataset.task_id / run_group(c);
  fs::create_directories(group);
  write_if_changed(group / "config.json", c.snapshot() + "\n");

  eval::RunSpec base{train_config_of(c), selection_of(c)};
  std::vector<eval::RunResult> results(c.seeds.size());
  parallel_for(c.seeds.size(), c.jobs, [&](std::size_t i) {
    eval::RunSpec spec = base;
    spec.train.seed = spec.selection.seed = c.seeds[i];
    results[i] = eval::run_cached(exp, spec, group / ("seed" + std::to_string(c.seeds[i])));
  });

  std::vector<double> test;
  for (const eval::RunResult &r : results) {
    const auto &t = r.metrics.at(data::Split::kTest);
    test.push_back(t.auroc);
    io.out << "seed " << r.seed << ": best epoch " << r.best_epoch << " of " << r.epochs_run
           << ", valid auroc " << fixed(r.metrics.at(data::Split::kValid).auroc)
           << ", test auroc " << fixed(t.auroc);
    if (t.concept_mae)
      io.out << ", test concept mae " << fixed(*t.concept_mae);
    io.out << "\n";
  }
  io.out << "test auroc " << fixed(eval::mean(test));
  if (test.size() > 1)
    io.out << " +- " << fixed(eval::sample_std(test));
  io.out << " over " << test.size() << " seed(s)\nrun directory " << group.string() << "\n";
  return 0;
}

int cmd_predict(const RunConfig &c, Streams io) {
  const model::Checkpoint ckpt = model::load_checkpoint(require(c.checkpoint, "checkpoint"));
  std::ifstream file;
  std::istream *in = &io.in;
  if (c.input != "-") {
    file.open(c.input);
    if (!file)
      throw Error(ErrorCategory::kData, "MissingInput", "cannot open " + c.input);
    in = &file;
  }
  io.out << "smiles,probability,logit\n";
  std::string line;
  std::size_t number = 0, failures = 0;
  while (std::getline(*in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    // First column only, so task CSVs can be piped in directly.
    const std::string smiles = util::split_delimited(line).front();
    if (smiles.empty() || (number == 1 && smiles == "smiles"))
      continue;
    try {
      const model::Prediction p = ckpt.model.predict(smiles);
      char buf[64];
      std::snprintf(buf, sizeof buf, ",%.9g,%.9g\n", p.probability, p.logit);
      io.out << util::escape_field(smiles) << buf;
    } catch (const Error &e) {
      ++failures;
      io.err << "line " << number << " (" << smiles << "): " << e.what() << "\n";
    }
  }
  if (failures > 0)
    throw Error(ErrorCategory::kData, "UnparsableInput",
                std::to_string(failures) + " input line(s) could not be predicted");
  return 0;
}

int cmd_explain(const RunConfig &c, Streams io) {
  const model::Checkpoint ckpt = model::load_checkpoint(require(c.checkpoint, "checkpoint"));
  const std::string &smiles = require(c.smiles, "smiles");
  io.out << model::explain(ckpt.model, smiles).to_text();
  if (c.atoms > 0)
    io.out << "\n" << model::explain_atoms(ckpt.model, smiles, c.atoms).to_text();
  return 0;
}

int cmd_ablate(const RunConfig &c, Streams io) {
  const eval::SweepAxis axis = eval::parse_axis(c.axis);
  const eval::Experiment exp = experiment_of(c);
  eval::SweepOptions options;
  options.base = train_config_of(c);
  options.selection = selection_of(c);
  options.grid = c.grid;
  options.seeds = c.seeds;
  options.out_dir = c.output;
  options.jobs = c.jobs;
  const fs::path root = fs::path(c.output) / exp.dataset.task_id / c.axis;
  fs::create_directories(root);
  write_if_changed(root / "config.json", c.snapshot() + "\n");
  const eval::SweepReport report = eval::run_sweep(exp, axis, options);
  io.out << report.summary() << "report directory " << root.string() << "\n";
  return 0;
}

int cmd_eval_report(const RunConfig &c, Streams io) {
  const fs::path root = c.output;
  if (!fs::is_directory(root))
    throw Error(ErrorCategory::kData, "NoResults", root.string() + " is not a directory");
  std::vector<fs::path> results, aggregates;
  for (const auto &entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file())
      continue;
    if (entry.path().filename() == "result.json")
      results.push_back(entry.path());
    else if (entry.path().filename() == "aggregate.csv")
      aggregates.push_back(entry.path());
  }
  if (results.empty())
    throw Error(ErrorCategory::kData, "NoResults", "no result.json under " + root.string());
  std::sort(results.begin(), results.end());
  std::sort(aggregates.begin(), aggregates.end());

  // One row per run group (the directory holding the seed directories).
  std::map<fs::path, std::vector<eval::RunResult>> groups;
  for (const fs::path &p : results)
    groups[fs::relative(p.parent_path().parent_path(), root)].push_back(
        eval::RunResult::from_json(util::read_file(p)));

  std::string text = "group\ttask\tvariant\tbackbone\tmethod\tk\tlambda\tseeds\t"
                     "test_auroc(mean+-std)\tvalid_concept_mae\n";
  for (const auto &[dir, runs] : groups) {
    std::vector<double> auroc, mae;
    for (const auto &r : runs) {
      auroc.push_back(r.metrics.at(data::Split::kTest).auroc);
      if (auto m = r.metrics.at(data::Split::kValid).concept_mae)
        mae.push_back(*m);
    }
    const auto &r = runs.front();
    const bool baseline = r.variant == eval::Variant::kBaseline;
    text += dir.string() + "\t" + r.task_id + "\t" + std::string(eval::variant_name(r.variant)) +
            "\t" + std::string(model::backbone_name(r.backbone)) + "\t" +
            (baseline ? "-" : r.selection_method) + "\t" +
            (baseline ? "-" : std::to_string(r.k)) + "\t" +
            (baseline ? "-" : util::format_double(r.lambda)) + "\t" +
            std::to_string(runs.size()) + "\t" + fixed(eval::mean(auroc)) + " +- " +
            (runs.size() > 1 ? fixed(eval::sample_std(auroc)) : std::string("n/a")) + "\t" +
            (mae.empty() ? std::string("n/a") : fixed(eval::mean(mae))) + "\n";
  }
  for (const fs::path &p : aggregates)
    text += "\n" + eval::SweepReport::from_csv(util::read_file(p)).summary();
  write_if_changed(root / "report.txt", text);
  io.out << text << "report " << (root / "report.txt").string() << "\n";
  return 0;
}

const std::vector<std::string> &command_names() {
  static const std::vector<std::string> names = {"curate",  "select", "split",  "train",
                                                 "predict", "explain", "ablate", "eval-report"};
  return names;
}

std::string format_error(const Error &e) {
  std::string message = e.what();
  const std::string prefix = e.kind() + ": ";
  if (message.rfind(prefix, 0) == 0)
    message.erase(0, prefix.size());
  return "error: " + e.kind() + " (" + std::string(category_name(e.category())) + "): " + message;
}

int run_command(const std::string &command, const RunConfig &config, Streams io) {
  static const std::map<std::string, int (*)(const RunConfig &, Streams)> table = {
      {"curate", cmd_curate},   {"select", cmd_select},   {"split", cmd_split},
      {"train", cmd_train},     {"predict", cmd_predict}, {"explain", cmd_explain},
      {"ablate", cmd_ablate},   {"eval-report", cmd_eval_report}};
  io.err << "config " << config.snapshot() << "\n";
  try {
    const auto it = table.find(command);
    if (it == table.end())
      throw Error(ErrorCategory::kUsage, "UnknownCommand", "'" + command + "'");
    return it->second(config, io);
  } catch (const Error &e) {
    io.err << format_error(e) << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception &e) {
    io.err << "error: Internal (internal): " << e.what() << "\n";
    return 1;
  }
}

} // namespace glassmol::cli
