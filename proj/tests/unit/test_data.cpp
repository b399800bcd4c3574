//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "glassmol/chem/scaffold.hpp"
#include "glassmol/chem/smiles.hpp"
#include "glassmol/data/batches.hpp"
#include "glassmol/model/glassmol_model.hpp"
#include "test_util.hpp"

using namespace glassmol;
using namespace glassmol::data;
using Catch::Matchers::WithinAbs;

namespace {

std::filesystem::path write_csv(const testing::TempDir &dir, const std::string &name,
                                const std::string &text) {
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string csv_of(const std::vector<std::string> &smiles) {
  std::string s = "smiles,label\n";
  for (std::size_t i = 0; i < smiles.size(); ++i)
    s += smiles[i] + "," + std::to_string(i % 2) + "\n";
  return s;
}

std::string kind_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  return "none";
}

// Independent statement of the greedy scaffold rule: integer arithmetic,
// repeated selection of the largest remaining group (ties: smaller key).
std::vector<Split> greedy_oracle(const std::vector<std::string> &keys) {
  std::vector<std::string> distinct;
  std::vector<int> sizes;
  for (const auto &k : keys) {
    auto it = std::find(distinct.begin(), distinct.end(), k);
    if (it == distinct.end()) {
      distinct.push_back(k);
      sizes.push_back(1);
    } else {
      ++sizes[it - distinct.begin()];
    }
  }
  const int n = static_cast<int>(keys.size());
  std::vector<bool> used(distinct.size(), false);
  std::map<std::string, Split> tag;
  int train = 0, valid = 0;
  for (std::size_t round = 0; round < distinct.size(); ++round) {
    int best = -1;
    for (std::size_t g = 0; g < distinct.size(); ++g) {
      if (used[g])
        continue;
      if (best < 0 || sizes[g] > sizes[best] ||
          (sizes[g] == sizes[best] && distinct[g] < distinct[best]))
        best = static_cast<int>(g);
    }
    used[best] = true;
    if (10 * train < 8 * n) {
      tag[distinct[best]] = Split::kTrain;
      train += sizes[best];
    } else if (10 * (train + valid) < 9 * n) {
      tag[distinct[best]] = Split::kValid;
      valid += sizes[best];
    } else {
      tag[distinct[best]] = Split::kTest;
    }
  }
  std::vector<Split> out;
  for (const auto &k : keys)
    out.push_back(tag[k]);
  return out;
}

const std::vector<std::string> kMixed = {
    "c1ccccc1C",       "c1ccccc1CC",   "c1ccccc1O",     "c1ccccc1N",      "C1CCCCC1C",
    "C1CCCCC1O",       "c1ccncc1C",    "CCO",           "CCCN",           "CC(=O)O",
    "c1ccc2ccccc2c1",  "C1CC1C",       "c1ccoc1C",      "c1ccsc1",        "C1CCNCC1C",
    "c1ccccc1C1CCCC1", "O=C1CCCCC1",   "c1ccccc1CCN",   "C1CCCCC1CC",     "CCCCCC"};

} // namespace

TEST_CASE("csv loading and quarantine", "[data][load]") {
  testing::TempDir dir("load");
  const auto ok = write_csv(dir, "ok.csv", "smiles,label,extra\nCCO,1,x\nc1ccccc1,0,y\nCCN,1,z\n");
  const Dataset ds = load_csv(ok);
  CHECK(ds.size() == 3);
  CHECK(ds.task_id == "ok");
  CHECK(ds.records[1].smiles == "c1ccccc1");
  CHECK(ds.records[1].label == 0);
  CHECK(ds.records[2].line == 4);
  CHECK(ds.digest.size() == 64);
  CHECK(ds.quarantine.empty());

  const auto mixed = write_csv(dir, "mixed.csv",
                               "label,smiles\n1,CCO\n2,CCC\n0,C1CC\n1,[H][H]\n0,CN\n");
  const Dataset m = load_csv(mixed, "toy");
  CHECK(m.task_id == "toy");
  REQUIRE(m.size() == 2);
  REQUIRE(m.quarantine.size() == 3);
  CHECK(m.quarantine[0].line == 3);
  CHECK(m.quarantine[0].reason == "label is not 0 or 1");
  CHECK(m.quarantine[1].smiles == "C1CC");
  CHECK(m.quarantine[2].reason == "no heavy atoms");
  const std::string report = quarantine_report(m);
  CHECK(report.rfind("line,smiles,label,reason\n3,CCC,2,", 0) == 0);

  CHECK(kind_of([&] { load_csv(write_csv(dir, "nosmiles.csv", "smi,label\nC,1\n")); }) ==
        "MissingColumn");
  CHECK(kind_of([&] { load_csv(write_csv(dir, "nolabel.csv", "smiles\nC\n")); }) ==
        "MissingColumn");
  CHECK(kind_of([&] { load_csv(write_csv(dir, "bad.csv", "smiles,label\nC(,1\n")); }) ==
        "EmptyDataset");
}

TEST_CASE("scaffold split examples", "[data][split]") {
  testing::TempDir dir("split");
  const std::vector<std::string> distinct = {
      "c1ccccc1C", "C1CCCCC1C", "c1ccncc1C", "C1CCCC1C",   "c1ccc2ccccc2c1",
      "c1ccoc1C",  "c1ccsc1C",  "C1CC1C",    "c1cc[nH]c1C", "C1CCC1C"};
  const Dataset ds = load_csv(write_csv(dir, "ten.csv", csv_of(distinct)));
  const SplitAssignment s = scaffold_split(ds);
  CHECK(s.count(Split::kTrain) == 8);
  CHECK(s.count(Split::kValid) == 1);
  CHECK(s.count(Split::kTest) == 1);
  CHECK(s.method == "scaffold");

  const Dataset acyclic = load_csv(write_csv(dir, "acyclic.csv", csv_of({"CCO", "CCN", "CCCC"})));
  CHECK(kind_of([&] { scaffold_split(acyclic); }) == "TooFewScaffolds");
  CHECK(kind_of([&] { scaffold_split(ds, {0.5, 0.2, 0.2}); }) == "InvalidFractions");
  CHECK(kind_of([&] { scaffold_split(ds, {1.2, -0.1, -0.1}); }) == "InvalidFractions");
}

TEST_CASE("scaffold split matches the brute-force greedy oracle", "[data][split]") {
  testing::TempDir dir("oracle");
  const Dataset ds = load_csv(write_csv(dir, "mixed.csv", csv_of(kMixed)));
  const SplitAssignment s = scaffold_split(ds, {0.8, 0.1, 0.1}, 3);
  CHECK(s.seed == 3);
  CHECK(s.tags == greedy_oracle(scaffold_keys(ds)));

  // Disjoint scaffold groups.
  std::map<std::string, std::set<Split>> seen;
  for (std::size_t i = 0; i < ds.size(); ++i)
    seen[s.scaffold_keys[i]].insert(s.tags[i]);
  for (const auto &[key, splits] : seen)
    CHECK(splits.size() == 1);

  // Row-order invariance: the same molecule gets the same tag.
  std::vector<std::string> reversed(kMixed.rbegin(), kMixed.rend());
  const Dataset rev = load_csv(write_csv(dir, "rev.csv", csv_of(reversed)));
  const SplitAssignment rs = scaffold_split(rev);
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(rs.tags[ds.size() - 1 - i] == s.tags[i]);

  // Split file round trip.
  write_split(dir / "split.csv", ds, s);
  const SplitAssignment back = read_split(dir / "split.csv", ds);
  CHECK(back.tags == s.tags);
  CHECK(back.seed == 3);
  const Dataset other = load_csv(write_csv(dir, "other.csv", csv_of({"CCCCCCCO"})));
  CHECK(kind_of([&] { read_split(dir / "split.csv", other); }) == "SplitMismatch");
}

TEST_CASE("scaffold split property: random corpora", "[data][split]") {
  testing::TempDir dir("prop");
  const auto &corpus = testing::drug_corpus();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> pick;
    const int n = 10 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i)
      pick.push_back(i % 3 == 0 ? kMixed[rng() % kMixed.size()] : corpus[rng() % corpus.size()]);
    const Dataset ds = load_csv(write_csv(dir, "p" + std::to_string(trial) + ".csv", csv_of(pick)));
    SplitAssignment s;
    try {
      s = scaffold_split(ds);
    } catch (const Error &e) {
      CHECK(e.kind() == "TooFewScaffolds");
      continue;
    }
    CHECK(s.tags == greedy_oracle(s.scaffold_keys));
    CHECK(s.count(Split::kTrain) + s.count(Split::kValid) + s.count(Split::kTest) == ds.size());
  }
}

TEST_CASE("curation gathers, standardizes and caches", "[data][curate]") {
  testing::TempDir dir("curate");
  const Dataset ds = load_csv(write_csv(dir, "mixed.csv", csv_of(kMixed)));
  const SplitAssignment split = scaffold_split(ds);
  const auto full = concepts::select_full("toy");
  const auto cache = dir / "cache.csv";

  const std::size_t before = descriptor_computations();
  const CuratedDataset c = curate(ds, full, split, cache);
  CHECK(descriptor_computations() - before == ds.size());
  REQUIRE(c.concepts.size() == ds.size());
  // Full pool: the selected columns are the pool columns in the same order.
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = 0; j < c.raw[i].size(); ++j)
      CHECK(c.stats->apply(j, c.raw[i].values[j]) == c.concepts[i][j]);
  // Training-split standardized means are zero.
  const auto train = split.indices(Split::kTrain);
  for (int j = 0; j < full.k; ++j) {
    double mean = 0;
    for (std::size_t i : train)
      mean += c.concepts[i][j];
    CHECK(std::fabs(mean / train.size()) < 1e-9);
  }

  // Cache hit: identical content, no recomputation.
  const std::size_t mid = descriptor_computations();
  const PoolTable hit = compute_pool_table(ds, cache);
  CHECK(hit.cache_hit);
  CHECK(descriptor_computations() == mid);
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(hit.raw[i].values == c.raw[i].values);

  // Another dataset at the same cache path misses and recomputes.
  std::vector<std::string> changed = kMixed;
  changed[0] = "c1ccccc1CCC";
  const Dataset ds2 = load_csv(write_csv(dir, "mixed2.csv", csv_of(changed)));
  CHECK_FALSE(compute_pool_table(ds2, cache).cache_hit);
  CHECK(descriptor_computations() == mid + ds2.size());

  // Threaded computation gives the same table.
  const PoolTable threaded = compute_pool_table(ds, std::nullopt, 3);
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(threaded.raw[i].values == c.raw[i].values);

  // A sub-selection keeps selection order.
  concepts::ConceptSelection sel;
  sel.task_id = "toy";
  sel.k = 2;
  sel.names = {"tpsa", "carbon_count"};
  const CuratedDataset small = curate(ds, hit, sel, split);
  CHECK(small.stats->names == sel.names);
  CHECK(small.concepts[0].size() == 2);
  const int carbon = *desc::pool_index("carbon_count");
  CHECK(small.concepts[0][1] == small.stats->apply(1, c.raw[0].values[carbon]));
}

TEST_CASE("concept noise injection", "[data][noise]") {
  CuratedDataset c;
  const int rows = 600, k = 20;
  util::Rng rng(1);
  for (int i = 0; i < rows; ++i) {
    c.dataset.records.push_back({"C", i % 2, 0});
    c.split.tags.push_back(i < 500 ? Split::kTrain : (i < 550 ? Split::kValid : Split::kTest));
    std::vector<double> v(k);
    for (double &x : v)
      x = rng.normal();
    c.concepts.push_back(v);
  }
  const CuratedDataset same = perturb_concepts(c, 0.0, 9);
  CHECK(same.concepts == c.concepts);

  const double sigma = 0.5;
  const CuratedDataset noisy = perturb_concepts(c, sigma, 9);
  std::vector<double> diffs;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < k; ++j) {
      if (c.split.tags[i] == Split::kTrain)
        diffs.push_back(noisy.concepts[i][j] - c.concepts[i][j]);
      else
        CHECK(noisy.concepts[i][j] == c.concepts[i][j]);
    }
  REQUIRE(diffs.size() >= 10000);
  double mean = 0, var = 0;
  for (double d : diffs)
    mean += d;
  mean /= diffs.size();
  for (double d : diffs)
    var += (d - mean) * (d - mean);
  var /= diffs.size() - 1;
  CHECK(std::fabs(var - sigma * sigma) < 0.1 * sigma * sigma);
  CHECK(perturb_concepts(c, sigma, 9).concepts == noisy.concepts);
  CHECK(perturb_concepts(c, sigma, 10).concepts != noisy.concepts);
  CHECK(kind_of([&] { perturb_concepts(c, -1.0, 0); }) == "InvalidSigma");
}

TEST_CASE("batches cover a split and agree with single forwards", "[data][batch]") {
  testing::TempDir dir("batch");
  const Dataset ds = load_csv(write_csv(dir, "mixed.csv", csv_of(kMixed)));
  const SplitAssignment split = scaffold_split(ds);
  concepts::ConceptSelection sel;
  sel.task_id = "toy";
  sel.k = 3;
  sel.names = {"tpsa", "carbon_count", "ring_count"};
  const CuratedDataset c = curate(ds, sel, split);
  const auto inputs = featurize_all(ds);

  const auto one = make_batches(c, inputs, Split::kTrain, 1000);
  REQUIRE(one.size() == 1);
  CHECK(one[0].records == split.indices(Split::kTrain));

  const auto shuffled = make_batches(c, inputs, Split::kTrain, 3, 42);
  CHECK(shuffled.size() == (split.count(Split::kTrain) + 2) / 3);
  std::vector<std::size_t> seen;
  for (const auto &b : shuffled) {
    seen.insert(seen.end(), b.records.begin(), b.records.end());
    CHECK(b.batch.size == static_cast<int>(b.records.size()));
    for (int i = 0; i < b.batch.size; ++i) {
      CHECK(b.labels.data[i] == ds.records[b.records[i]].label);
      CHECK(b.concepts.at(i, 2) == c.concepts[b.records[i]][2]);
    }
  }
  std::sort(seen.begin(), seen.end());
  CHECK(seen == split.indices(Split::kTrain));
  const auto again = make_batches(c, inputs, Split::kTrain, 3, 42);
  for (std::size_t i = 0; i < again.size(); ++i)
    CHECK(again[i].records == shuffled[i].records);

  for (auto bb : {model::Backbone::kGnn, model::Backbone::kSequence}) {
    model::ModelConfig cfg;
    cfg.encoder.backbone = bb;
    cfg.encoder.hidden = 32;
    const model::GlassMolModel m(cfg, sel, c.stats);
    for (const auto &b : make_batches(c, inputs, Split::kTrain, 5, 1)) {
      nn::Tape tape(false);
      const auto out = m.forward(tape, b.batch);
      for (int i = 0; i < b.batch.size; ++i)
        CHECK(std::fabs(out.logits.value().data[i] - m.predict(inputs[b.records[i]]).logit) <
              1e-5);
    }
  }
  CHECK(kind_of([&] { make_batches(c, inputs, Split::kTrain, 0); }) == "InvalidBatchSize");
}
