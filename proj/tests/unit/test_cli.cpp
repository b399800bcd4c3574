//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "glassmol/cli/commands.hpp"
#include "glassmol/data/curate.hpp"
#include "glassmol/eval/sweeps.hpp"
#include "glassmol/model/checkpoint.hpp"
#include "glassmol/util/csv.hpp"
#include "glassmol/util/digest.hpp"
#include "test_util.hpp"

using namespace glassmol;
using namespace glassmol::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(GLASSMOL_TEST_DATA_DIR) / "cli";

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured run(const std::string &command, const RunConfig &config, const std::string &input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run_command(command, config, {in, out, err});
  return {code, out.str(), err.str()};
}

EnvironmentLookup fake_env(std::map<std::string, std::string> vars) {
  return [vars](const std::string &name) -> std::optional<std::string> {
    auto it = vars.find(name);
    if (it == vars.end())
      return std::nullopt;
    return it->second;
  };
}

void write(const fs::path &p, const std::string &text) {
  std::ofstream(p) << text;
}

// Small, fast model settings shared by the training-based cases.
RunConfig tiny(const fs::path &dataset, const fs::path &output) {
  RunConfig c;
  c.dataset = dataset.string();
  c.output = output.string();
  c.k = 10;
  c.hidden = 16;
  c.layers = 2;
  c.projector_hidden = 16;
  c.epochs = 3;
  c.seeds = {0};
  return c;
}

std::map<fs::path, std::string> tree(const fs::path &root) {
  std::map<fs::path, std::string> files;
  for (const auto &e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      files[fs::relative(e.path(), root)] = util::sha256_file(e.path());
  return files;
}

} // namespace

TEST_CASE("config precedence: flags over file over environment over defaults", "[cli]") {
  const testing::TempDir dir("cli_precedence");
  const auto none = fake_env({});

  const RunConfig defaults = resolve_config({}, std::nullopt, none);
  CHECK(defaults.k == 40);
  CHECK(defaults.lambda == 1.0);
  CHECK(defaults.backbone == "gnn");
  CHECK(defaults.seeds == std::vector<std::uint64_t>{0, 1, 2, 3, 4});

  const auto env = fake_env({{"GLASSMOL_K", "20"},
                             {"GLASSMOL_LAMBDA", "0.5"},
                             {"GLASSMOL_BACKBONE", "sequence"},
                             {"GLASSMOL_LLM_ENDPOINT", "http://127.0.0.1:9/v1"},
                             {"GLASSMOL_LLM_KEY", "secret"}});
  const RunConfig from_env = resolve_config({}, std::nullopt, env);
  CHECK(from_env.k == 20);
  CHECK(from_env.lambda == 0.5);
  CHECK(from_env.backbone == "sequence");
  CHECK(from_env.endpoint == "http://127.0.0.1:9/v1");
  CHECK(from_env.key == "secret");

  const fs::path file = dir / "config.json";
  write(file, R"({"k": 30, "lambda": 2, "seeds": [7, 8]})");
  const RunConfig from_file = resolve_config({}, file, env);
  CHECK(from_file.k == 30);                  // file beats environment
  CHECK(from_file.lambda == 2.0);
  CHECK(from_file.backbone == "sequence");   // environment still fills the rest
  CHECK(from_file.seeds == std::vector<std::uint64_t>{7, 8});

  const RunConfig from_flags = resolve_config({{"k", "10"}, {"seeds", "3"}}, file, env);
  CHECK(from_flags.k == 10);                 // flag beats file
  CHECK(from_flags.lambda == 2.0);
  CHECK(from_flags.seeds == std::vector<std::uint64_t>{3});
}

TEST_CASE("config snapshot reproduces the resolved config and hides the key", "[cli]") {
  const testing::TempDir dir("cli_snapshot");
  const auto env = fake_env({{"GLASSMOL_LLM_KEY", "secret"}, {"GLASSMOL_NOISE", "0.25"}});
  const RunConfig a = resolve_config(
      {{"k", "12"}, {"grid", "0,0.5"}, {"lr", "0.003"}, {"dataset", "x.csv"}}, std::nullopt, env);
  const std::string snap = a.snapshot();
  CHECK(snap.find("secret") == std::string::npos);
  CHECK(nlohmann::json::parse(snap).size() == RunConfig::keys().size() - 1);

  write(dir / "snap.json", snap);
  const RunConfig b = resolve_config({}, dir / "snap.json", fake_env({}));
  CHECK(b.snapshot() == snap);
  CHECK(b.grid == std::vector<std::string>{"0", "0.5"});
  CHECK(b.noise == 0.25);
}

TEST_CASE("config errors are usage errors", "[cli]") {
  const testing::TempDir dir("cli_config_errors");
  const auto none = fake_env({});
  auto kind_of = [&](auto &&fn) {
    try {
      fn();
    } catch (const Error &e) {
      CHECK(e.category() == ErrorCategory::kUsage);
      return e.kind();
    }
    return std::string("none");
  };
  CHECK(kind_of([&] { resolve_config({{"kk", "1"}}, std::nullopt, none); }) == "UnknownConfigKey");
  CHECK(kind_of([&] { resolve_config({{"k", "ten"}}, std::nullopt, none); }) ==
        "InvalidConfigValue");
  CHECK(kind_of([&] { resolve_config({{"k", "0"}}, std::nullopt, none); }) ==
        "InvalidConfigValue");
  CHECK(kind_of([&] { resolve_config({{"seeds", ""}}, std::nullopt, none); }) ==
        "InvalidConfigValue");
  CHECK(kind_of([&] { resolve_config({}, std::nullopt, fake_env({{"GLASSMOL_LR", "x"}})); }) ==
        "InvalidConfigValue");
  CHECK(kind_of([&] { resolve_config({}, dir / "missing.json", none); }) == "MissingConfigFile");
  write(dir / "bad.json", "[1, 2]");
  CHECK(kind_of([&] { resolve_config({}, dir / "bad.json", none); }) == "MalformedConfigFile");
}

TEST_CASE("every command prints its snapshot first and maps errors to exit codes", "[cli]") {
  const testing::TempDir dir("cli_codes");
  RunConfig c;
  c.output = (dir / "out").string();

  const Captured missing = run("train", c);
  CHECK(missing.code == 2);
  CHECK(missing.err.rfind("config {", 0) == 0);
  CHECK(missing.err.find("error: MissingArgument (usage): --dataset is required") !=
        std::string::npos);

  c.dataset = (dir / "nope.csv").string();
  const Captured no_data = run("curate", c);
  CHECK(no_data.code == 3);
  CHECK(no_data.err.find("error: ") != std::string::npos);

  RunConfig bad = tiny(kFixtures / "dili.csv", dir / "out");
  bad.variant = "ensemble";
  CHECK(run("train", bad).code == 2);

  RunConfig diverge = tiny(kFixtures / "dili.csv", dir / "out");
  diverge.lr = 1e308;
  const Captured d = run("train", diverge);
  CHECK(d.code == 4);
  CHECK(d.err.find("error: DivergedTraining (training)") != std::string::npos);

  CHECK(run("frobnicate", c).code == 2);
}

TEST_CASE("curate writes the cache once and lists quarantined rows", "[cli]") {
  const testing::TempDir dir("cli_curate");
  std::string csv = util::read_file(kFixtures / "dili.csv");
  csv += "C1CC(,1,X,0.9\n[H][H],0,Y,0.1\nCCO,7,Z,0.5\n";
  write(dir / "dili.csv", csv);
  RunConfig c;
  c.dataset = (dir / "dili.csv").string();
  c.output = (dir / "out").string();

  const Captured first = run("curate", c);
  REQUIRE(first.code == 0);
  CHECK(first.out.find("computed 90 molecules") != std::string::npos);
  CHECK(first.out.find("3 quarantined") != std::string::npos);
  CHECK(first.out.find("no heavy atoms") != std::string::npos);
  CHECK(first.out.find("label is not 0 or 1") != std::string::npos);
  const fs::path report = dir / "out" / "dili.pool.quarantine.csv";
  REQUIRE(fs::exists(report));
  CHECK(util::read_file(report).find("C1CC(") != std::string::npos);

  const auto before = tree(dir / "out");
  const auto mtime = fs::last_write_time(dir / "out" / "dili.pool.csv");
  const std::size_t computed = data::descriptor_computations();
  const Captured second = run("curate", c);
  CHECK(second.code == 0);
  CHECK(second.out.find("nothing recomputed") != std::string::npos);
  CHECK(data::descriptor_computations() == computed);
  CHECK(tree(dir / "out") == before);
  CHECK(fs::last_write_time(dir / "out" / "dili.pool.csv") == mtime);
}

TEST_CASE("select: static, missing registry entry, offline llm, provenance", "[cli]") {
  const testing::TempDir dir("cli_select");
  RunConfig c;
  c.task_id = "dili";
  c.k = 10;
  c.output = (dir / "out").string();

  const Captured ok = run("select", c);
  REQUIRE(ok.code == 0);
  CHECK(ok.out.find("method static, k 10") != std::string::npos);
  CHECK(ok.out.find("provenance prompt: select_concepts.v1") != std::string::npos);
  const auto written = concepts::read_selection(dir / "out" / "dili.k10.json");
  CHECK(written.k == 10);
  // The written file is itself a usable registry.
  RunConfig again = c;
  again.selections = c.output;
  again.output = (dir / "out2").string();
  CHECK(run("select", again).code == 0);
  CHECK(util::read_file(dir / "out2" / "dili.k10.json") ==
        util::read_file(dir / "out" / "dili.k10.json"));

  RunConfig missing = c;
  missing.task_id = "not_a_task";
  const Captured m = run("select", missing);
  CHECK(m.code == 3);
  CHECK(m.err.find("error: MissingSelection (data)") != std::string::npos);

  RunConfig llm = c;
  llm.method = "llm";
  const Captured offline = run("select", llm);
  CHECK(offline.code == 5);
  CHECK(offline.err.find("EndpointUnavailable") != std::string::npos);
  CHECK(offline.err.find("--method static") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "dili.k10.transcript.json"));

  RunConfig random = c;
  random.method = "random";
  random.seeds = {4};
  const Captured r = run("select", random);
  CHECK(r.code == 0);
  CHECK(r.out.find("provenance seed: 4") != std::string::npos);
}

TEST_CASE("split writes a file that train then reuses", "[cli]") {
  const testing::TempDir dir("cli_split");
  RunConfig c = tiny(kFixtures / "dili.csv", dir / "out");
  const Captured s = run("split", c);
  REQUIRE(s.code == 0);
  const fs::path split = dir / "out" / "dili.split.csv";
  REQUIRE(fs::exists(split));
  CHECK(s.out.find("train ") != std::string::npos);
  c.split = split.string();
  const std::string bytes = util::read_file(split);
  CHECK(run("train", c).code == 0);
  CHECK(util::read_file(split) == bytes);
}

TEST_CASE("train --seed 3 twice gives identical checkpoints and reports", "[cli]") {
  const testing::TempDir dir("cli_determinism");
  const fs::path run_dir = fs::path("dili") / "glassmol_gnn_static_k10_lambda1_noise0" / "seed3";
  RunConfig a = tiny(kFixtures / "dili.csv", dir / "a");
  a.seeds = {3};
  RunConfig b = a;
  b.output = (dir / "b").string();
  const Captured ra = run("train", a), rb = run("train", b);
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  for (const char *file : {"checkpoint.json", "result.json", "selection.json"})
    CHECK(util::sha256_file(dir / "a" / run_dir / file) ==
          util::sha256_file(dir / "b" / run_dir / file));
  CHECK(ra.out.substr(0, ra.out.find("run directory")) ==
        rb.out.substr(0, rb.out.find("run directory")));

  // Rerunning into the same directory is a no-op.
  const auto before = tree(dir / "a");
  CHECK(run("train", a).code == 0);
  CHECK(tree(dir / "a") == before);
}

TEST_CASE("commands write only inside their output directory", "[cli]") {
  const testing::TempDir dir("cli_sandbox");
  fs::create_directories(dir / "in");
  fs::copy_file(kFixtures / "dili.csv", dir / "in" / "dili.csv");
  const auto inputs = tree(dir / "in");
  RunConfig c = tiny(dir / "in" / "dili.csv", dir / "out");
  c.cache = (dir / "out" / "pool.csv").string();
  c.split = (dir / "out" / "split.csv").string();
  for (const char *command : {"curate", "select", "split", "train"})
    CHECK(run(command, c).code == 0);
  c.grid = {"0", "1"};
  CHECK(run("ablate", c).code == 0);
  CHECK(run("eval-report", c).code == 0);
  CHECK(tree(dir / "in") == inputs);
  std::set<fs::path> top;
  for (const auto &e : fs::directory_iterator(dir.path()))
    top.insert(e.path().filename());
  CHECK(top == std::set<fs::path>{"in", "out"});
}

TEST_CASE("predict streams standard input to CSV", "[cli]") {
  RunConfig c;
  c.checkpoint = (kFixtures / "explain_checkpoint.json").string();
  const Captured p = run("predict", c, "smiles\nCCO\n\nc1ccccc1O,1\n");
  REQUIRE(p.code == 0);
  std::istringstream lines(p.out);
  std::string header, first, second, extra;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(header == "smiles,probability,logit");
  CHECK(first.rfind("CCO,", 0) == 0);
  CHECK(second.rfind("c1ccccc1O,", 0) == 0);
  CHECK_FALSE(std::getline(lines, extra));

  // Probability and logit agree with the library.
  const auto fields = util::split_delimited(first);
  const model::Checkpoint ckpt = model::load_checkpoint(c.checkpoint);
  const auto expected = ckpt.model.predict("CCO");
  CHECK(std::stod(fields[1]) == Catch::Approx(expected.probability).epsilon(1e-8));
  CHECK(std::stod(fields[2]) == Catch::Approx(expected.logit).epsilon(1e-8));

  const Captured bad = run("predict", c, "CCO\nC1CC\n");
  CHECK(bad.code == 3);
  CHECK(bad.out.find("CCO,") != std::string::npos);
  CHECK(bad.err.find("line 2 (C1CC)") != std::string::npos);
}

TEST_CASE("explain reproduces the stored golden report byte for byte", "[cli]") {
  RunConfig c;
  c.checkpoint = (kFixtures / "explain_checkpoint.json").string();
  c.smiles = "CC(=O)Nc1ccc(O)cc1";
  c.atoms = 3;
  const Captured e = run("explain", c);
  REQUIRE(e.code == 0);
  CHECK(e.out == util::read_file(kFixtures / "explain_report.txt"));

  c.atoms = 0;
  const Captured table = run("explain", c);
  CHECK(table.out.find("# glassmol contribution report v1") == 0);
  CHECK(table.out.find("unmatched") == std::string::npos);

  c.smiles = "";
  CHECK(run("explain", c).code == 2);
}

TEST_CASE("ablate lambda runs the full grid on the fixture and eval-report aggregates it", "[cli]") {
  const testing::TempDir dir("cli_ablate");
  RunConfig c = tiny(kFixtures / "dili.csv", dir / "out");
  c.axis = "lambda";
  c.epochs = 2;
  const Captured a = run("ablate", c);
  REQUIRE(a.code == 0);
  const fs::path root = dir / "out" / "dili" / "lambda";
  const auto report = eval::SweepReport::from_csv(util::read_file(root / "aggregate.csv"));
  REQUIRE(report.points.size() == eval::default_grid(eval::SweepAxis::kLambda).size());
  for (std::size_t i = 0; i < report.points.size(); ++i)
    CHECK(report.points[i].value == eval::default_grid(eval::SweepAxis::kLambda)[i]);
  CHECK(fs::exists(root / "chart.svg"));
  CHECK(fs::exists(root / "config.json"));
  CHECK(a.out.find("directional check") != std::string::npos);

  RunConfig r;
  r.output = c.output;
  const Captured e = run("eval-report", r);
  REQUIRE(e.code == 0);
  CHECK(e.out.find("dili/lambda/10\tdili\tglassmol\tgnn\tstatic\t10\t10\t1\t") !=
        std::string::npos);
  CHECK(e.out.find("task dili, sweep over lambda") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "report.txt"));

  RunConfig empty;
  empty.output = (dir / "nothing").string();
  CHECK(run("eval-report", empty).code == 3);
}

TEST_CASE("the executable maps parse errors to exit code 2", "[cli]") {
  const std::string bin = GLASSMOL_CLI_PATH;
  auto status = [](const std::string &cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status(bin + " --help") == 0);
  CHECK(status(bin) == 2);
  CHECK(status(bin + " train --no-such-flag") == 2);
  CHECK(status(bin + " train --k ten") == 2);
  CHECK(status(bin + " explain --checkpoint /nonexistent/ckpt.json --smiles C") == 3);
  CHECK(status("env GLASSMOL_LLM_ENDPOINT= " + bin + " select --task dili --method llm -o " +
               (fs::temp_directory_path() / "glassmol_cli_exe").string()) == 5);
}
