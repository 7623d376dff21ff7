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

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "io_util.hpp"
#include "pixood/error.hpp"
#include "pixood/rng.hpp"

namespace pixood {

namespace {

const std::vector<std::string>& KnownMethods() {
  static const std::vector<std::string> kMethods = {
      "ll",      "stir",           "shake",           "vslat",  "hslat",   "shake16",
      "stirshake-coord", "stirshake-indep", "ic-png", "ic-best", "lrat"};
  return kMethods;
}

bool IsFamilyMethod(const std::string& method) {
  return method != "ll" && method != "ic-png" && method != "ic-best" && method != "lrat";
}

std::string Num(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

TransformFamily FamilyFor(const std::string& method, const GridConfig& config) {
  const Family family = MethodFamily(method);
  return EnumerateFamily(family, IsSampledFamily(family) ? std::optional<uint64_t>(config.family_seed)
                                                         : std::nullopt);
}

std::vector<SampleInputs> EvalSubset(const DatasetScores& data, const GridConfig& config) {
  if (data.samples.size() <= config.n_eval) return data.samples;
  std::vector<size_t> order(data.samples.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(config.seed);
  rng.Shuffle(order);
  std::vector<SampleInputs> subset;
  subset.reserve(config.n_eval);
  for (size_t i = 0; i < config.n_eval; ++i) subset.push_back(data.samples[order[i]]);
  return subset;
}

double RequireValue(const std::optional<double>& value, const std::string& sample_id,
                    const std::string& what) {
  if (!value) throw CompletenessError({{sample_id, what}});
  return *value;
}

double IdentityOf(const SampleInputs& sample) {
  const auto it = sample.lls.find("identity");
  if (it == sample.lls.end()) throw CompletenessError({{sample.sample_id, "identity"}});
  return it->second;
}

}  // namespace

bool IsKnownMethod(const std::string& method) {
  const auto& known = KnownMethods();
  return std::find(known.begin(), known.end(), method) != known.end();
}

Family MethodFamily(const std::string& method) {
  if (!IsKnownMethod(method)) throw Error(ErrorKind::kConfig, "unknown method '" + method + "'");
  if (!IsFamilyMethod(method)) return Family::kIdentity;
  return ParseFamily(method);
}

std::vector<OodScore> ScoreSamples(const DatasetScores& data, const std::string& method,
                                   const GridConfig& config, const Cutoff& cutoff) {
  std::vector<OodScore> scores;
  scores.reserve(data.samples.size());
  const bool family_method = IsFamilyMethod(method);
  const TransformFamily family = FamilyFor(method, config);
  for (const auto& sample : data.samples) {
    const double identity = IdentityOf(sample);
    if (method == "ll") {
      scores.push_back(Passed(identity));
    } else if (family_method) {
      const double lr = LrScore(sample.lls, family, sample.sample_id);
      scores.push_back(config.conditional ? ConditionalScore(identity, lr, cutoff) : Passed(lr));
    } else if (method == "ic-png") {
      scores.push_back(Passed(-IcScore(identity, RequireValue(sample.png_bits, sample.sample_id, "complexity/png"))));
    } else if (method == "ic-best") {
      scores.push_back(Passed(-IcScore(identity, RequireValue(sample.best_bits, sample.sample_id, "complexity/best"))));
    } else {
      scores.push_back(Passed(LratScore(identity, RequireValue(sample.background_ll, sample.sample_id, "background"))));
    }
  }
  return scores;
}

std::vector<EvalResult> EvalGrid(const std::vector<IdBlock>& blocks, const GridConfig& config) {
  for (const auto& method : config.methods) MethodFamily(method);
  std::vector<EvalResult> results;
  for (const auto& block : blocks) {
    const Cutoff cutoff = FitCutoff(block.train_lls, config.cutoff, config.tail_mass);
    const DatasetScores id_subset{block.id_test.dataset_id, EvalSubset(block.id_test, config)};
    for (const auto& ood : block.ood_tests) {
      const DatasetScores ood_subset{ood.dataset_id, EvalSubset(ood, config)};
      for (const auto& method : config.methods) {
        const auto id_scores = ScoreSamples(id_subset, method, config, cutoff);
        const auto ood_scores = ScoreSamples(ood_subset, method, config, cutoff);
        EvalResult r;
        r.id_dataset = block.id_dataset;
        r.ood_dataset = ood.dataset_id;
        r.method = method;
        r.auroc = Auroc(id_scores, ood_scores);
        r.auprc = Auprc(id_scores, ood_scores);
        r.fpr_at_tpr = FprAtTpr(id_scores, ood_scores, config.tpr_target);
        r.tpr_target = config.tpr_target;
        r.n_id = id_scores.size();
        r.n_ood = ood_scores.size();
        results.push_back(std::move(r));
      }
    }
  }
  return results;
}

std::vector<double> IdentityLls(const ModelState& model, const Dataset& dataset) {
  std::vector<double> lls;
  lls.reserve(dataset.size());
  for (const auto& image : dataset.images()) lls.push_back(LogLikelihood(model, image));
  return lls;
}

DatasetScores ComputeDatasetScores(const ModelState& foreground, const ModelState* background,
                                   const Dataset& dataset, const GridConfig& config) {
  std::vector<TransformFamily> families;
  std::set<Family> seen;
  bool want_png = false, want_best = false, want_bg = false;
  for (const auto& method : config.methods) {
    const Family family = MethodFamily(method);
    if (family != Family::kIdentity && seen.insert(family).second) families.push_back(FamilyFor(method, config));
    want_png |= method == "ic-png";
    want_best |= method == "ic-best";
    want_bg |= method == "lrat";
  }
  if (want_bg && background == nullptr) {
    throw Error(ErrorKind::kConfig, "lrat requires a background model");
  }
  DatasetScores out;
  out.dataset_id = dataset.id();
  out.samples.reserve(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    const auto& image = dataset[i];
    SampleInputs sample;
    sample.sample_id = SampleId(i);
    sample.lls["identity"] = LogLikelihood(foreground, image);
    for (const auto& family : families) {
      for (const auto& tid : family.members) {
        sample.lls[tid.str()] = LogLikelihood(foreground, Apply(tid, image));
      }
    }
    if (want_png) sample.png_bits = CompressedLengthBits(image, Codec::kPng).bits;
    if (want_best) sample.best_bits = BestLength(image, {Codec::kPng, Codec::kDeflateRaw}).bits;
    if (want_bg) sample.background_ll = LogLikelihood(*background, image);
    out.samples.push_back(std::move(sample));
  }
  return out;
}

DatasetScores ScoresFromTable(const std::string& dataset_id, const JoinedTable& table) {
  DatasetScores out;
  out.dataset_id = dataset_id;
  for (const auto& id : table.sample_ids) out.samples.push_back({id, table.row(id), {}, {}, {}});
  return out;
}

std::string ReportCsv(const std::vector<EvalResult>& results, uint64_t seed) {
  std::ostringstream out;
  out << "id_dataset,ood_dataset,method,auroc,auprc,fpr_at_tpr,n_id,n_ood,seed\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& r : results) {
    out << quote(r.id_dataset) << ',' << quote(r.ood_dataset) << ',' << quote(r.method) << ','
        << Num(r.auroc) << ',' << Num(r.auprc) << ',' << Num(r.fpr_at_tpr) << ',' << r.n_id << ','
        << r.n_ood << ',' << seed << '\n';
  }
  return out.str();
}

std::string ReportJson(const std::vector<EvalResult>& results, uint64_t seed) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : results) {
    rows.push_back({{"id_dataset", r.id_dataset},
                    {"ood_dataset", r.ood_dataset},
                    {"method", r.method},
                    {"auroc", r.auroc},
                    {"auprc", r.auprc},
                    {"fpr_at_tpr", r.fpr_at_tpr},
                    {"tpr_target", r.tpr_target},
                    {"n_id", r.n_id},
                    {"n_ood", r.n_ood},
                    {"seed", seed}});
  }
  return nlohmann::json{{"seed", seed}, {"results", rows}}.dump(2) + "\n";
}

namespace {

std::string XmlEscape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string ReportSvg(const std::vector<EvalResult>& results) {
  std::vector<std::string> methods;
  std::vector<std::pair<std::string, std::string>> panels;
  for (const auto& r : results) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    const auto key = std::make_pair(r.id_dataset, r.ood_dataset);
    if (std::find(panels.begin(), panels.end(), key) == panels.end()) panels.push_back(key);
  }
  const int bar = 18, gap = 6, panel_h = 150, label_w = 10;
  const int panel_w = label_w + static_cast<int>(methods.size()) * (bar + gap) + 20;
  const int width = std::max(200, panel_w);
  const int height = static_cast<int>(panels.size()) * (panel_h + 40) + 20;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"9\">\n";
  for (size_t p = 0; p < panels.size(); ++p) {
    const int top = static_cast<int>(p) * (panel_h + 40) + 20;
    svg << "<text x=\"4\" y=\"" << top - 6 << "\">" << XmlEscape(panels[p].first) << " vs " << XmlEscape(panels[p].second)
        << " (AUROC)</text>\n";
    svg << "<line x1=\"" << label_w << "\" y1=\"" << top + panel_h / 2 << "\" x2=\"" << panel_w
        << "\" y2=\"" << top + panel_h / 2 << "\" stroke=\"#999\" stroke-dasharray=\"3,3\"/>\n";
    for (const auto& r : results) {
      if (r.id_dataset != panels[p].first || r.ood_dataset != panels[p].second) continue;
      const auto m = std::find(methods.begin(), methods.end(), r.method) - methods.begin();
      const int x = label_w + static_cast<int>(m) * (bar + gap);
      const int h = static_cast<int>(r.auroc * panel_h);
      svg << "<rect x=\"" << x << "\" y=\"" << top + panel_h - h << "\" width=\"" << bar
          << "\" height=\"" << h << "\" fill=\"#4477aa\"><title>" << XmlEscape(r.method) << ": " << Num(r.auroc)
          << "</title></rect>\n";
      svg << "<text x=\"" << x << "\" y=\"" << top + panel_h + 12 << "\" transform=\"rotate(30 " << x
          << "," << top + panel_h + 12 << ")\">" << XmlEscape(r.method) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void WriteReports(const std::vector<EvalResult>& results, uint64_t seed,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  WriteFileBytes(out_dir / "results.csv", ReportCsv(results, seed));
  WriteFileBytes(out_dir / "results.json", ReportJson(results, seed));
  WriteFileBytes(out_dir / "results.svg", ReportSvg(results));
}

}  // namespace pixood
