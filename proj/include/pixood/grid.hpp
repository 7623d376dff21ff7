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

#ifndef PIXOOD_GRID_HPP_
#define PIXOOD_GRID_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pixood/complexity.hpp"
#include "pixood/llcache.hpp"
#include "pixood/metrics.hpp"
#include "pixood/model.hpp"
#include "pixood/scoring.hpp"

namespace pixood {

// Everything any scoring method may need for one test sample.
struct SampleInputs {
  std::string sample_id;
  LlMap lls;                            // identity plus transformed log-likelihoods
  std::optional<double> png_bits;       // ic-png
  std::optional<double> best_bits;      // ic-best
  std::optional<double> background_ll;  // lrat
};

struct DatasetScores {
  std::string dataset_id;
  std::vector<SampleInputs> samples;
};

// One in-distribution dataset with its model's view of the test sets.
struct IdBlock {
  std::string id_dataset;
  std::vector<double> train_lls;  // identity LLs of the training split (cutoff fitting)
  DatasetScores id_test;
  std::vector<DatasetScores> ood_tests;
};

struct GridConfig {
  // Subset of: ll, stir, shake, vslat, hslat, shake16, stirshake-coord,
  // stirshake-indep, ic-png, ic-best, lrat.
  std::vector<std::string> methods = {"ll", "stir", "shake"};
  CutoffMethod cutoff = CutoffMethod::kMad3;
  double tail_mass = kDefaultTailMass;
  bool conditional = true;
  double tpr_target = kDefaultTprTarget;
  size_t n_eval = 5000;
  uint64_t seed = 0;         // evaluation-subset shuffle
  uint64_t family_seed = 0;  // sampled transform families
};

struct EvalResult {
  std::string id_dataset;
  std::string ood_dataset;
  std::string method;
  double auroc = 0.0;
  double auprc = 0.0;
  double fpr_at_tpr = 0.0;
  double tpr_target = kDefaultTprTarget;
  size_t n_id = 0;
  size_t n_ood = 0;
};

bool IsKnownMethod(const std::string& method);
// Transform family a method needs (identity for ll and the baselines).
Family MethodFamily(const std::string& method);

// Higher-is-ID score of every sample under `method`.
std::vector<OodScore> ScoreSamples(const DatasetScores& data, const std::string& method,
                                   const GridConfig& config, const Cutoff& cutoff);

// One EvalResult per (ID, OOD, method), in that nesting order.
std::vector<EvalResult> EvalGrid(const std::vector<IdBlock>& blocks, const GridConfig& config);

// Evaluates the built-in model(s) on `dataset` for every method in `config`.
// `background` is required only when lrat is requested.
DatasetScores ComputeDatasetScores(const ModelState& foreground, const ModelState* background,
                                   const Dataset& dataset, const GridConfig& config);

// Identity log-likelihood of every image, in dataset order.
std::vector<double> IdentityLls(const ModelState& model, const Dataset& dataset);

// Builds per-sample inputs from a joined likelihood-cache table.
DatasetScores ScoresFromTable(const std::string& dataset_id, const JoinedTable& table);

// CSV columns: id_dataset,ood_dataset,method,auroc,auprc,fpr_at_tpr,n_id,n_ood,seed
std::string ReportCsv(const std::vector<EvalResult>& results, uint64_t seed);
std::string ReportJson(const std::vector<EvalResult>& results, uint64_t seed);
// AUROC bar chart, one panel per (ID, OOD) pair.
std::string ReportSvg(const std::vector<EvalResult>& results);

void WriteReports(const std::vector<EvalResult>& results, uint64_t seed,
                  const std::filesystem::path& out_dir);

}  // namespace pixood

#endif  // PIXOOD_GRID_HPP_
