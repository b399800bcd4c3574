//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "glassmol/chem/smiles.hpp"
#include "glassmol/model/checkpoint.hpp"
#include "glassmol/model/explain.hpp"
#include "glassmol/nn/adam.hpp"
#include "test_util.hpp"

using namespace glassmol;
using namespace glassmol::model;
using Catch::Matchers::WithinAbs;

namespace {

ModelConfig tiny_config(Backbone backbone = Backbone::kGnn, std::uint64_t seed = 7) {
  ModelConfig c;
  c.encoder.backbone = backbone;
  c.encoder.hidden = 16;
  c.encoder.layers = 2;
  c.encoder.embedding = 8;
  c.projector_hidden = 24;
  c.seed = seed;
  return c;
}

concepts::ConceptSelection make_selection(std::vector<std::string> names) {
  concepts::ConceptSelection s;
  s.task_id = "toy";
  s.method = concepts::SelectionMethod::kStatic;
  s.k = static_cast<int>(names.size());
  s.names = std::move(names);
  return s;
}

// Train-split style stats for `names` over `smiles`.
std::shared_ptr<const desc::StandardizationStats>
fit_stats(const std::vector<std::string> &names, const std::vector<std::string> &smiles) {
  std::vector<desc::ConceptVector> rows;
  for (const auto &s : smiles)
    rows.push_back(desc::gather(desc::compute_pool(chem::parse_smiles(s)), names));
  return std::make_shared<desc::StandardizationStats>(desc::fit_standardization(rows));
}

nn::Tensor standardized_targets(const desc::StandardizationStats &stats,
                                const std::vector<std::string> &smiles) {
  const int k = static_cast<int>(stats.names.size());
  nn::Tensor t = nn::Tensor::zeros({static_cast<int>(smiles.size()), k});
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    const auto raw = desc::gather(desc::compute_pool(chem::parse_smiles(smiles[i])), stats.names);
    for (int j = 0; j < k; ++j)
      t.at(static_cast<int>(i), j) = stats.apply(j, raw.values[j]);
  }
  return t;
}

GlassMolModel toy_model(Backbone backbone = Backbone::kGnn) {
  const std::vector<std::string> names = {"tpsa", "aniline", "carbon_count", "hydroxyl"};
  const auto &corpus = testing::drug_corpus();
  return GlassMolModel(tiny_config(backbone), make_selection(names),
                       fit_stats(names, {corpus.begin(), corpus.end()}));
}

// Full-batch Adam on a fixed molecule set.
void train(GlassMolModel &model, const std::vector<std::string> &smiles,
           const std::vector<double> &labels, const nn::Tensor *targets,
           double lambda, int steps, double lr = 1e-2) {
  std::vector<MoleculeInput> inputs;
  for (const auto &s : smiles)
    inputs.push_back(featurize(s));
  std::vector<const MoleculeInput *> ptrs;
  for (const auto &in : inputs)
    ptrs.push_back(&in);
  const Batch batch = collate(ptrs);
  nn::Tensor y = nn::Tensor::zeros({static_cast<int>(labels.size()), 1});
  y.data = labels;
  std::vector<nn::Tensor *> params;
  for (auto &p : model.parameters())
    params.push_back(p.tensor);
  nn::AdamState state = nn::AdamState::for_parameters(params);
  nn::AdamConfig cfg;
  cfg.lr = lr;
  for (int s = 0; s < steps; ++s) {
    nn::Tape tape;
    const JointLoss loss = joint_loss(tape, model, batch, y, targets, lambda);
    tape.backward(loss.total);
    tape.gradients_to(params);
    nn::adam_step(params, state, cfg);
  }
}

} // namespace

TEST_CASE("node and edge featurization", "[model][featurize]") {
  const GraphInput g = featurize_graph(chem::parse_smiles("CCO"));
  REQUIRE(g.nodes.shape == std::vector<int>{3, kNodeFeatures});
  REQUIRE(g.edges.size() == 4);
  // Methyl carbon: element C, heavy degree 1, three hydrogens.
  CHECK(g.nodes.at(0, 0) == 1.0);
  CHECK(g.nodes.at(0, 14) == 1.0);
  CHECK(g.nodes.at(0, 24) == 1.0);
  // Hydroxyl oxygen: element O, degree 1, one hydrogen.
  CHECK(g.nodes.at(2, 2) == 1.0);
  CHECK(g.nodes.at(2, 22) == 1.0);
  for (int r = 0; r < 3; ++r) {
    double onehots = 0;
    for (int c = 0; c < kNodeFeatures; ++c)
      if (c != 19)
        onehots += g.nodes.at(r, c);
    CHECK(onehots == 3.0); // element, degree, hydrogens; not aromatic
  }

  const GraphInput benzene = featurize_graph(chem::parse_smiles("c1ccccc1"));
  for (int e = 0; e < static_cast<int>(benzene.edges.size()); ++e)
    CHECK(benzene.edge_features.at(e, 3) == 1.0);
  CHECK(benzene.nodes.at(0, 20) == 1.0);

  const GraphInput charged = featurize_graph(chem::parse_smiles("C[N+](C)(C)C.[Cl-]"));
  CHECK(charged.nodes.at(1, 19) == 1.0);
  CHECK(charged.nodes.at(5, 6) == 1.0); // chlorine slot

  // Hydrogens written as atoms are folded away.
  CHECK(featurize_graph(chem::parse_smiles("[H]OC([H])([H])[H]")).num_nodes() == 2);
  CHECK_THROWS_AS(featurize("not a smiles"), Error);
}

TEST_CASE("collation offsets edges and records membership", "[model][batch]") {
  const MoleculeInput a = featurize("CCC");
  const MoleculeInput b = featurize("C1CC1C");
  const Batch batch = collate({&a, &b});
  REQUIRE(batch.nodes.rows() == 7);
  REQUIRE(batch.size == 2);
  CHECK(batch.membership == std::vector<int>{0, 0, 0, 1, 1, 1, 1});
  const std::size_t ea = a.graph.edges.size();
  for (std::size_t e = 0; e < b.graph.edges.size(); ++e) {
    CHECK(batch.edges.source[ea + e] == b.graph.edges.source[e] + 3);
    CHECK(batch.edges.target[ea + e] == b.graph.edges.target[e] + 3);
  }
  CHECK(batch.tokens.sequences == 2);
  CHECK(batch.tokens.tokens.size() == 3 + 6);
}

TEST_CASE("batched and single-molecule forward agree", "[model][batch]") {
  for (Backbone bb : {Backbone::kGnn, Backbone::kSequence}) {
    const GlassMolModel model = toy_model(bb);
    std::vector<MoleculeInput> inputs;
    for (const char *s : testing::drug_corpus())
      inputs.push_back(featurize(s));
    std::vector<const MoleculeInput *> ptrs;
    for (const auto &in : inputs)
      ptrs.push_back(&in);
    nn::Tape tape(false);
    const auto out = model.forward(tape, collate(ptrs));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const Prediction p = model.predict(inputs[i]);
      CHECK_THAT(out.logits.value().data[i], WithinAbs(p.logit, 1e-9));
      for (int j = 0; j < model.k(); ++j)
        CHECK_THAT(out.concepts.value().at(static_cast<int>(i), j),
                   WithinAbs(p.concepts.values[j], 1e-9));
    }
  }
}

TEST_CASE("forward contract", "[model][forward]") {
  GlassMolModel model = toy_model();
  CHECK(model.k() == 4);
  const Prediction p1 = model.predict("CC(=O)Nc1ccc(O)cc1");
  const Prediction p2 = model.predict("CC(=O)Nc1ccc(O)cc1");
  CHECK(p1.logit == p2.logit);
  CHECK(p1.concepts.values == p2.concepts.values);
  CHECK(p1.concepts.names == model.selection().names);
  CHECK(p1.concepts.standardized);
  CHECK_THAT(p1.probability, WithinAbs(1.0 / (1.0 + std::exp(-p1.logit)), 1e-7));

  std::fill(model.head().weight.data.begin(), model.head().weight.data.end(), 0.0);
  model.head().bias.data[0] = 0.0;
  for (const char *s : testing::drug_corpus())
    CHECK(model.predict(s).probability == 0.5);

  CHECK_THROWS_AS(parse_backbone("transformer"), Error);
  auto bad_stats = std::make_shared<desc::StandardizationStats>();
  bad_stats->names = {"tpsa"};
  CHECK_THROWS_AS(GlassMolModel(tiny_config(), make_selection({"tpsa", "hbd"}), bad_stats),
                  Error);
}

TEST_CASE("joint loss composition", "[model][loss]") {
  const GlassMolModel model = toy_model();
  const std::vector<std::string> smiles = {"CCO", "c1ccccc1N", "CC(=O)O"};
  std::vector<MoleculeInput> inputs;
  for (const auto &s : smiles)
    inputs.push_back(featurize(s));
  const Batch batch = collate({&inputs[0], &inputs[1], &inputs[2]});
  const nn::Tensor y = nn::Tensor::matrix(3, 1, {1, 0, 1});
  const nn::Tensor targets = standardized_targets(*model.stats(), smiles);

  nn::Tape t0(false);
  const LossBreakdown zero = joint_loss(t0, model, batch, y, &targets, 0.0).breakdown;
  CHECK(zero.total == zero.task_loss);
  CHECK(zero.concept_loss > 0);

  nn::Tape t1(false);
  const LossBreakdown one = joint_loss(t1, model, batch, y, &targets, 2.5).breakdown;
  CHECK(one.task_loss == zero.task_loss);
  CHECK(one.total == one.task_loss + 2.5 * one.concept_loss);
  CHECK(one.lambda == 2.5);

  // Oracle: the concept term is the mean over molecules of the per-molecule
  // mean absolute error.
  nn::Tape t2(false);
  const auto out = model.forward(t2, batch);
  double oracle = 0;
  for (int i = 0; i < 3; ++i) {
    double row = 0;
    for (int j = 0; j < 4; ++j)
      row += std::fabs(targets.at(i, j) - out.concepts.value().at(i, j));
    oracle += row / 4;
  }
  CHECK_THAT(one.concept_loss, WithinAbs(oracle / 3, 1e-12));

  // Exact concepts give zero concept loss.
  nn::Tensor exact = out.concepts.value();
  nn::Tape t3(false);
  CHECK(joint_loss(t3, model, batch, y, &exact, 1.0).breakdown.concept_loss == 0.0);

  nn::Tape t4(false);
  CHECK_THROWS_AS(joint_loss(t4, model, batch, y, nullptr, 1.0), Error);
  nn::Tape t5(false);
  const nn::Tensor narrow = nn::Tensor::zeros({3, 2});
  CHECK_THROWS_AS(joint_loss(t5, model, batch, y, &narrow, 1.0), Error);
  nn::Tape t6(false);
  CHECK(joint_loss(t6, model, batch, y, nullptr, 0.0).breakdown.total == zero.task_loss);
}

TEST_CASE("contribution report decomposes the logit exactly", "[model][explain]") {
  GlassMolModel model = toy_model();
  for (const char *s : testing::drug_corpus()) {
    const ContributionReport r = explain(model, s);
    const Prediction p = model.predict(s);
    double sum = r.bias;
    for (const auto &e : r.entries)
      sum += e.contribution;
    CHECK(std::fabs(sum - r.logit) < 1e-6);
    CHECK(r.logit == p.logit);
    for (std::size_t i = 1; i < r.entries.size(); ++i)
      CHECK(std::fabs(r.entries[i - 1].contribution) >= std::fabs(r.entries[i].contribution));
    for (std::size_t i = 0; i < r.entries.size(); ++i)
      CHECK(r.entries[i].rank == static_cast<int>(i) + 1);
    // The head on the stored concept vector reproduces the logit.
    CHECK_THAT(model.head_logit(p.concepts.values), WithinAbs(p.logit, 1e-12));
    // Linearity: nudging one concept moves the logit by w_k * delta.
    for (int j = 0; j < model.k(); ++j) {
      auto c = p.concepts.values;
      c[j] += 0.75;
      CHECK_THAT(model.head_logit(c) - p.logit,
                 WithinAbs(model.head().weight.data[j] * 0.75, 1e-12));
    }
    // Raw values are the de-standardized concept predictions.
    for (const auto &e : r.entries) {
      const int j = static_cast<int>(
          std::find(model.selection().names.begin(), model.selection().names.end(), e.name) -
          model.selection().names.begin());
      CHECK_THAT(e.raw_value, WithinAbs(model.stats()->invert(j, e.standardized), 1e-12));
    }
  }

  std::fill(model.head().weight.data.begin(), model.head().weight.data.end(), 0.0);
  model.head().bias.data[0] = -0.25;
  const ContributionReport flat = explain(model, "CCN");
  for (const auto &e : flat.entries)
    CHECK(e.contribution == 0.0);
  CHECK(flat.logit == -0.25);
}

TEST_CASE("contribution report text layout", "[model][explain]") {
  GlassMolModel model = toy_model();
  model.head().weight.data = {0.5, -2.0, 0.0, 1.0};
  model.head().bias.data[0] = 0.125;
  const ContributionReport r = explain(model, "Nc1ccccc1");
  const std::string text = r.to_text();
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] == '\n') {
      lines.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  REQUIRE(lines.size() == 3 + 4 + 3);
  CHECK(lines[0] == "# glassmol contribution report v1");
  CHECK(lines[1] == "smiles\tNc1ccccc1");
  CHECK(lines[2] == "rank\tconcept\traw_value\tstandardized_value\tweight\tcontribution");
  CHECK(lines[3].rfind("1\t", 0) == 0);
  CHECK(lines[7] == "bias\t0.125");
  CHECK(lines[8].rfind("logit\t", 0) == 0);
  CHECK(lines[9].rfind("probability\t", 0) == 0);
  CHECK(text == explain(model, "Nc1ccccc1").to_text());
}

TEST_CASE("atom highlights come from fragment matches", "[model][explain]") {
  GlassMolModel model = toy_model();
  // Only aniline and tpsa carry weight; aniline dominates.
  model.head().weight.data = {1e-6, 50.0, 0.0, 0.0};
  const AtomExplanation ex = explain_atoms(model, "Cc1ccccc1N", 2);
  REQUIRE(ex.highlights.size() == 1);
  CHECK(ex.highlights[0].name == "aniline");
  REQUIRE(ex.highlights[0].atom_sets.size() == 1);
  // N (atom 7) plus the six aromatic carbons (1..6); the methyl is excluded.
  CHECK(ex.highlights[0].atom_sets[0] == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
  CHECK(ex.global_concepts == std::vector<std::string>{"tpsa"});

  const AtomExplanation none = explain_atoms(model, "CCCC", 2);
  CHECK(none.highlights.empty());
  CHECK(none.global_concepts == std::vector<std::string>{"tpsa"});
  CHECK(none.unmatched == std::vector<std::string>{"aniline"});

  const AtomExplanation empty = explain_atoms(model, "Cc1ccccc1N", 0);
  CHECK(empty.highlights.empty());
  CHECK(empty.global_concepts.empty());
  CHECK(ex.to_text().rfind("highlight\taniline\t", 0) == 0);
}

TEST_CASE("baseline variant", "[model][baseline]") {
  const ModelConfig cfg = tiny_config();
  GlassMolModel glass = toy_model();
  GlassMolModel base = GlassMolModel::make_baseline(cfg);
  CHECK(base.is_baseline());
  CHECK(base.k() == 0);
  CHECK_THROWS_MATCHES(explain(base, "CCO"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error &e) {
                         return e.kind() == "UnsupportedForBaseline";
                       }));
  // Delta: projector output layer (h*K + K) plus head (K + 1) against the
  // baseline's output layer (h + 1).
  const std::size_t h = static_cast<std::size_t>(cfg.projector_hidden), k = 4;
  CHECK(glass.parameter_count() - base.parameter_count() == (h * k + k) + (k + 1) - (h + 1));
  CHECK(base.predict("CCO").concepts.size() == 0);

  // Lambda is never read.
  GlassMolModel a = base, b = base;
  const std::vector<std::string> smiles = {"CCO", "c1ccccc1"};
  train(a, smiles, {1, 0}, nullptr, 0.0, 5);
  train(b, smiles, {1, 0}, nullptr, 7.0, 5);
  auto pa = a.parameters(), pb = b.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i)
    CHECK(pa[i].tensor->data == pb[i].tensor->data);
}

TEST_CASE("tiny model overfits two molecules", "[model][train]") {
  GlassMolModel model = toy_model();
  const std::vector<std::string> smiles = {"CCO", "c1ccc(N)cc1"};
  const nn::Tensor targets = standardized_targets(*model.stats(), smiles);
  train(model, smiles, {1, 0}, &targets, 1.0, 150);
  CHECK(model.predict("CCO").logit > 0);
  CHECK(model.predict("c1ccc(N)cc1").logit < 0);
}

TEST_CASE("the determining concept ranks first", "[model][explain]") {
  // Label = contains a hydroxyl group; hydroxyl is the only concept that
  // separates the classes, and the concept loss anchors the bottleneck.
  const std::vector<std::string> smiles = {
      "CCO",   "CCCO",  "OCC(C)C", "OC1CCCC1", "Oc1ccccc1", "CC(O)CC",
      "CCC",   "CCCC",  "CC(C)C",  "C1CCCC1",  "c1ccccc1",  "CCCCC",
      "CCOCC", "CCNCC", "CC(=O)C", "CCCl",     "CCCCO",     "CCCCN"};
  const std::vector<double> labels = {1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0};
  const std::vector<std::string> names = {"hydroxyl", "carbon_count", "ring_count"};
  GlassMolModel model(tiny_config(), make_selection(names), fit_stats(names, smiles));
  const nn::Tensor targets = standardized_targets(*model.stats(), smiles);
  train(model, smiles, labels, &targets, 1.0, 400);
  for (const char *probe : {"CCCCCO", "OC1CCCCC1"})
    CHECK(explain(model, probe).entries[0].name == "hydroxyl");
}

TEST_CASE("checkpoint round trip is bit-identical", "[model][checkpoint]") {
  testing::TempDir dir("ckpt");
  for (bool baseline : {false, true}) {
    GlassMolModel model =
        baseline ? GlassMolModel::make_baseline(tiny_config(Backbone::kSequence)) : toy_model();
    train(model, {"CCO", "c1ccccc1"}, {1, 0}, nullptr, 0.0, 3);
    const auto path = dir / (baseline ? "base.json" : "glass.json");
    save_checkpoint(path, model, {{"epoch", "3"}});
    Checkpoint loaded = load_checkpoint(path);
    CHECK(loaded.metadata.at("epoch") == "3");
    CHECK(loaded.model.is_baseline() == baseline);
    CHECK(loaded.model.config() == model.config());
    auto pa = model.parameters(), pb = loaded.model.parameters();
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      CHECK(pa[i].name == pb[i].name);
      CHECK(pa[i].tensor->data == pb[i].tensor->data);
    }
    CHECK(serialize_checkpoint(loaded.model, {{"epoch", "3"}}) ==
          serialize_checkpoint(model, {{"epoch", "3"}}));
    CHECK(loaded.model.predict("CC(=O)O").logit == model.predict("CC(=O)O").logit);
    if (!baseline) {
      CHECK(loaded.model.selection() == model.selection());
      CHECK(loaded.model.stats()->mean == model.stats()->mean);
    }
  }

  GlassMolModel model = toy_model();
  std::string text = serialize_checkpoint(model);
  auto kind_of = [](const std::string &t) {
    try {
      parse_checkpoint(t, "mem");
    } catch (const Error &e) {
      return e.kind();
    }
    return std::string("none");
  };
  auto replace = [&](std::string from, std::string to) {
    std::string t = text;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  CHECK(kind_of(replace("glassmol-pool-v1", "glassmol-pool-v0")) == "PoolVersionMismatch");
  CHECK(kind_of(replace("\"selection_digest\": \"", "\"selection_digest\": \"0")) ==
        "MalformedCheckpoint");
  CHECK(kind_of(replace("\"hidden\": 16", "\"hidden\": 17")) == "ShapeMismatch");
  CHECK(kind_of("{") == "MalformedCheckpoint");
  CHECK(kind_of(text) == "none");
}
