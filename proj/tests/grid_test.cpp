/*
 * Copyright 2026 The pixood Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pixood/grid.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pixood/error.hpp"
#include "pixood/rng.hpp"

namespace pixood {
namespace {

// Synthetic per-sample inputs: ID samples have large identity LLs and large
// drops under every transform.
DatasetScores FakeScores(const std::string& id, int n, double base, double drop, uint64_t seed) {
  Rng rng(seed);
  DatasetScores out{id, {}};
  std::vector<std::string> ids;
  for (Family f : {Family::kStir, Family::kShake}) {
    for (const auto& t : EnumerateFamily(f).ids()) ids.push_back(t);
  }
  for (int i = 0; i < n; ++i) {
    SampleInputs s;
    s.sample_id = SampleId(static_cast<size_t>(i));
    const double identity = base + rng.Uniform(-5.0, 5.0);
    s.lls["identity"] = identity;
    for (const auto& t : ids) s.lls[t] = identity - drop - rng.Uniform(0.0, 1.0);
    s.png_bits = 1000.0 + rng.Uniform(0.0, 50.0);
    s.best_bits = *s.png_bits - 10.0;
    s.background_ll = identity - rng.Uniform(0.0, 3.0);
    out.samples.push_back(std::move(s));
  }
  return out;
}

IdBlock FakeBlock(const std::string& name, uint64_t seed) {
  IdBlock block;
  block.id_dataset = name;
  Rng rng(seed);
  for (int i = 0; i < 50; ++i) block.train_lls.push_back(-100.0 + rng.Uniform(-5.0, 5.0));
  block.id_test = FakeScores(name + "-test", 30, -100.0, 10.0, seed + 1);
  block.ood_tests = {FakeScores("near", 20, -95.0, 1.0, seed + 2), FakeScores("far", 20, -300.0, 1.0, seed + 3),
                     FakeScores("mid", 25, -100.0, 5.0, seed + 4)};
  return block;
}

TEST(GridTest, Cardinality) {
  GridConfig config;
  config.methods = {"ll", "stir", "shake", "ic-png"};
  const auto results = EvalGrid({FakeBlock("a", 1), FakeBlock("b", 10)}, config);
  EXPECT_EQ(results.size(), 24u);
  EXPECT_EQ(results[0].id_dataset, "a");
  EXPECT_EQ(results[0].ood_dataset, "near");
  EXPECT_EQ(results[3].method, "ic-png");
  for (const auto& r : results) {
    EXPECT_GE(r.auroc, 0.0);
    EXPECT_LE(r.auroc, 1.0);
    EXPECT_GE(r.auprc, 0.0);
    EXPECT_LE(r.auprc, 1.0);
    EXPECT_GE(r.fpr_at_tpr, 0.0);
    EXPECT_LE(r.fpr_at_tpr, 1.0);
  }
}

TEST(GridTest, LlMethodIsRawAuroc) {
  const IdBlock block = FakeBlock("a", 3);
  GridConfig config;
  config.methods = {"ll"};
  const auto results = EvalGrid({block}, config);
  std::vector<OodScore> id, ood;
  for (const auto& s : block.id_test.samples) id.push_back(Passed(s.lls.at("identity")));
  for (const auto& s : block.ood_tests[0].samples) ood.push_back(Passed(s.lls.at("identity")));
  EXPECT_EQ(results[0].auroc, Auroc(id, ood));
}

TEST(GridTest, ConditionalCorrectionFiltersLowLikelihoods) {
  const IdBlock block = FakeBlock("a", 4);
  GridConfig config;
  config.methods = {"stir"};
  const Cutoff cutoff = FitCutoff(block.train_lls, config.cutoff);
  const auto far = ScoreSamples(block.ood_tests[1], "stir", config, cutoff);
  for (const auto& s : far) EXPECT_EQ(s.tier, Tier::kFiltered);
  const auto results = EvalGrid({block}, config);
  EXPECT_EQ(results[1].auroc, 1.0);
  config.conditional = false;
  for (const auto& s : ScoreSamples(block.ood_tests[1], "stir", config, cutoff)) EXPECT_EQ(s.tier, Tier::kPassed);
  config.methods = {"ll"};
  config.conditional = true;
  for (const auto& s : ScoreSamples(block.ood_tests[1], "ll", config, cutoff)) EXPECT_EQ(s.tier, Tier::kPassed);
}

TEST(GridTest, DeterministicAndSubsampled) {
  GridConfig config;
  config.methods = {"ll", "stir", "lrat", "ic-best"};
  config.n_eval = 10;
  config.seed = 7;
  const auto a = EvalGrid({FakeBlock("a", 5)}, config);
  const auto b = EvalGrid({FakeBlock("a", 5)}, config);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].auroc, b[i].auroc);
    EXPECT_EQ(a[i].auprc, b[i].auprc);
    EXPECT_EQ(a[i].n_id, 10u);
    EXPECT_EQ(a[i].n_ood, 10u);
  }
  EXPECT_EQ(ReportCsv(a, 7), ReportCsv(b, 7));
}

TEST(GridTest, UnknownMethodAndMissingInputs) {
  GridConfig config;
  config.methods = {"ll", "warp"};
  EXPECT_THROW(EvalGrid({FakeBlock("a", 6)}, config), Error);
  IdBlock block = FakeBlock("a", 6);
  block.id_test.samples[2].png_bits.reset();
  config.methods = {"ic-png"};
  EXPECT_THROW(EvalGrid({block}, config), CompletenessError);
  block = FakeBlock("a", 6);
  block.ood_tests[0].samples[1].lls.erase("stir/flip");
  config.methods = {"stir"};
  try {
    EvalGrid({block}, config);
    FAIL();
  } catch (const CompletenessError& e) {
    EXPECT_EQ(e.missing()[0], (std::pair<std::string, std::string>{"1", "stir/flip"}));
  }
}

TEST(GridTest, ReportSchemas) {
  GridConfig config;
  config.methods = {"ll", "stir"};
  const auto results = EvalGrid({FakeBlock("a&b", 8)}, config);
  const std::string csv = ReportCsv(results, 3);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "id_dataset,ood_dataset,method,auroc,auprc,fpr_at_tpr,n_id,n_ood,seed");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8) << line;
  }
  EXPECT_EQ(rows, 6);
  const auto json = nlohmann::json::parse(ReportJson(results, 3));
  EXPECT_EQ(json["seed"], 3);
  ASSERT_EQ(json["results"].size(), 6u);
  EXPECT_EQ(json["results"][0]["auroc"].get<double>(), results[0].auroc);
  for (const char* key : {"id_dataset", "ood_dataset", "method", "auroc", "auprc", "fpr_at_tpr", "n_id", "n_ood", "seed"}) {
    EXPECT_TRUE(json["results"][5].contains(key)) << key;
  }
  const std::string svg = ReportSvg(results);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("a&amp;b"), std::string::npos);
  EXPECT_EQ(svg.find("a&b"), std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "pixood_grid_reports";
  std::filesystem::remove_all(dir);
  WriteReports(results, 3, dir);
  for (const char* name : {"results.csv", "results.json", "results.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  std::filesystem::remove_all(dir);
}

TEST(GridTest, ComputedScoresFeedTheGrid) {
  ModelConfig mc;
  mc.context_radius = 1;
  mc.hidden_width = 4;
  mc.num_mix = 2;
  const ModelState fg(mc, {8, 8, 1});
  ModelState bg(mc, {8, 8, 1});
  bg.mutable_params()[bg.b2_offset() + 4] = 1.0;
  SyntheticSpec spec;
  spec.count = 4;
  spec.shape = {8, 8, 1};
  const Dataset ds = GenerateSynthetic(spec);
  GridConfig config;
  config.methods = {"ll", "stir", "shake16", "ic-png", "ic-best", "lrat"};
  config.family_seed = 2;
  EXPECT_THROW(ComputeDatasetScores(fg, nullptr, ds, config), Error);
  const DatasetScores scores = ComputeDatasetScores(fg, &bg, ds, config);
  ASSERT_EQ(scores.samples.size(), 4u);
  EXPECT_EQ(scores.samples[0].lls.size(), 1u + 7u + 20u);
  EXPECT_EQ(scores.samples[0].lls.at("identity"), LogLikelihood(fg, ds[0]));
  EXPECT_EQ(*scores.samples[1].background_ll, LogLikelihood(bg, ds[1]));
  EXPECT_EQ(*scores.samples[2].png_bits, CompressedLengthBits(ds[2], Codec::kPng).bits);
  EXPECT_EQ(IdentityLls(fg, ds)[3], LogLikelihood(fg, ds[3]));
}

TEST(GridTest, ScoresFromJoinedTable) {
  JoinedTable table;
  table.sample_ids = {"x", "y"};
  table.rows["x"] = {{"identity", -1.0}};
  table.rows["y"] = {{"identity", -2.0}};
  const DatasetScores scores = ScoresFromTable("cached", table);
  ASSERT_EQ(scores.samples.size(), 2u);
  EXPECT_EQ(scores.samples[1].sample_id, "y");
  EXPECT_EQ(scores.samples[1].lls.at("identity"), -2.0);
  EXPECT_FALSE(scores.samples[0].png_bits.has_value());
}

}  // namespace
}  // namespace pixood
