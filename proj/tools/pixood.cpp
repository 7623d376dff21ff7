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

// Command-line front end: synth, train, ll, score, eval, probe, bench.

#include <sys/resource.h>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pixood/checkpoint.hpp"
#include "pixood/complexity.hpp"
#include "pixood/error.hpp"
#include "pixood/grid.hpp"
#include "pixood/image.hpp"
#include "pixood/llcache.hpp"
#include "pixood/metrics.hpp"
#include "pixood/model.hpp"
#include "pixood/probes.hpp"
#include "pixood/scoring.hpp"
#include "pixood/transforms.hpp"
#include "pixood/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pixood {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

const std::vector<std::string> kFamilyNames = {"identity", "stir",    "shake",           "vslat",
                                               "hslat",    "shake16", "stirshake-coord", "stirshake-indep"};

struct Options {
  // shared
  std::string out = ".";
  uint64_t seed = 0;
  std::string shape;
  // synth
  std::string spec;
  std::string name = "dataset.idx";
  // train
  std::string train;
  std::string val;
  double val_fraction = 0.1;
  int radius = 4;
  int hidden = 32;
  int mix = 5;
  int epochs = 10;
  int batch = 16;
  double lr = 1e-3;
  bool no_positional = false;
  bool no_long_range = false;
  double long_range_fraction = 0.0;
  double mutate = 0.0;
  // ll / score / eval / probe / bench
  std::string model;
  std::string background;
  std::string model_id;
  std::vector<std::string> data;
  std::string family = "stir";
  uint64_t family_seed = 0;
  std::vector<std::string> caches;
  std::vector<std::string> train_caches;
  std::vector<std::string> id;
  std::string id_train;
  std::vector<std::string> ood;
  std::vector<std::string> methods = {"ll", "stir", "shake"};
  std::string cutoff = "mad3";
  double tail_mass = kDefaultTailMass;
  bool no_conditional = false;
  size_t n_eval = 5000;
  double tpr = kDefaultTprTarget;
  std::string kind = "degradation";
  int patch = 3;
  int sites = kDefaultProbeSites;
  std::string codec = "png";
  int n = 20;
};

std::optional<Shape> ParseShapeFlag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  Shape shape;
  char x1 = 0, x2 = 0;
  std::istringstream in(text);
  in >> shape.height >> x1 >> shape.width >> x2 >> shape.channels;
  if (!in || x1 != 'x' || x2 != 'x' || !in.eof()) throw Error(ErrorKind::kConfig, "bad --shape '" + text + "'");
  return shape;
}

// A dataset source is "synth:<spec>", an IDX file, or an image directory,
// optionally prefixed with "<name>@" to set the dataset id.
Dataset LoadSource(const std::string& source, const std::optional<Shape>& shape) {
  std::string name, body = source;
  if (const auto at = source.find('@'); at != std::string::npos && source.rfind("synth:", 0) != 0) {
    name = source.substr(0, at);
    body = source.substr(at + 1);
  }
  Dataset dataset = [&] {
    if (body.rfind("synth:", 0) == 0) return GenerateSynthetic(ParseSyntheticSpec(body.substr(6)));
    if (fs::is_directory(body)) {
      if (!shape) throw Error(ErrorKind::kConfig, "image directory " + body + " needs --shape");
      return LoadImageDirectory(body, *shape);
    }
    return ReadIdxFile(body);
  }();
  return name.empty() ? dataset : dataset.WithId(name);
}

bool IsCachePath(const std::string& path) {
  const auto ext = fs::path(path).extension();
  return ext == ".ndjson" || ext == ".jsonl";
}

std::optional<uint64_t> SeedFor(Family family, uint64_t seed) {
  return IsSampledFamily(family) ? std::optional<uint64_t>(seed) : std::nullopt;
}

void PrepareOutput(const CLI::App& sub, const Options& opt, int argc, char** argv) {
  fs::create_directories(opt.out);
  json options = json::object();
  for (const CLI::Option* o : sub.get_options()) {
    const std::string name = o->get_name();
    if (name == "--help") continue;
    if (o->count() > 0) {
      const auto& values = o->results();
      options[name] = values.size() == 1 ? json(values[0]) : json(values);
    } else {
      options[name] = o->get_default_str();
    }
  }
  std::vector<std::string> args(argv, argv + argc);
  const json config = {{"version", kVersion}, {"subcommand", sub.get_name()}, {"options", options}, {"argv", args}};
  std::ofstream file(fs::path(opt.out) / "run_config.json", std::ios::trunc);
  if (!file) throw Error(ErrorKind::kIo, "cannot write run_config.json in " + opt.out);
  file << config.dump(2) << '\n';
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text)) throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

std::string Num(double value) {
  char buffer[64];
  return std::string(buffer, std::to_chars(buffer, buffer + sizeof(buffer), value).ptr);
}

int RunSynth(const Options& opt) {
  const Dataset dataset = GenerateSynthetic(ParseSyntheticSpec(opt.spec));
  WriteIdxFile(dataset, fs::path(opt.out) / opt.name);
  std::printf("wrote %zu images (%s) to %s\n", dataset.size(), ToString(dataset.shape()).c_str(),
              (fs::path(opt.out) / opt.name).c_str());
  return kExitOk;
}

int RunTrain(const Options& opt) {
  const auto shape = ParseShapeFlag(opt.shape);
  Dataset train = LoadSource(opt.train, shape);
  std::optional<Dataset> val;
  if (!opt.val.empty()) {
    val = LoadSource(opt.val, shape);
  } else {
    auto [t, v] = SplitDataset(train, opt.val_fraction, opt.seed);
    train = std::move(t);
    val = std::move(v);
  }
  if (opt.mutate > 0.0) {
    train = MutateDataset(train, opt.mutate, opt.seed);
    val = MutateDataset(*val, opt.mutate, opt.seed + 1);
  }
  ModelConfig config;
  config.context_radius = opt.radius;
  config.hidden_width = opt.hidden;
  config.num_mix = opt.mix;
  config.epochs = opt.epochs;
  config.batch_size = opt.batch;
  config.learning_rate = opt.lr;
  config.seed = opt.seed;
  config.positional_features = !opt.no_positional;
  config.long_range_hidden_fraction = opt.long_range_fraction;
  if (opt.no_long_range) config.long_range_taps = std::vector<Offset>{};
  const ModelState model = Train(config, train, *val);
  SaveModel(model, fs::path(opt.out) / "model.json");
  for (const auto& h : model.history()) {
    std::printf("epoch %d train_nll %.6f val_nll %.6f\n", h.epoch, h.train_nll, h.val_nll);
  }
  return kExitOk;
}

int RunLl(const Options& opt) {
  if (opt.data.size() != 1) throw Error(ErrorKind::kConfig, "ll takes exactly one --data source");
  const ModelState state = LoadModel(opt.model);
  const Dataset dataset = LoadSource(opt.data[0], ParseShapeFlag(opt.shape));
  const Family family = ParseFamily(opt.family);
  const std::string model_id = opt.model_id.empty() ? fs::path(opt.model).stem().string() : opt.model_id;
  const BuiltinModel model(state, model_id);
  const LikelihoodCache cache = ComputeCache(model, dataset, EnumerateFamily(family, SeedFor(family, opt.family_seed)));
  WriteCacheFile(cache, fs::path(opt.out) / "cache.ndjson");
  std::printf("wrote %zu records for %zu samples\n", cache.records.size(), dataset.size());
  return kExitOk;
}

std::vector<LikelihoodCache> ReadCaches(const std::vector<std::string>& paths) {
  std::vector<LikelihoodCache> caches;
  for (const auto& p : paths) caches.push_back(ReadCacheFile(p));
  return caches;
}

// Joins caches over the union of the families the methods need.
JoinedTable JoinForMethods(const std::vector<LikelihoodCache>& caches, const std::vector<std::string>& methods,
                           uint64_t family_seed) {
  std::vector<Family> families = {Family::kIdentity};
  for (const auto& m : methods) {
    const Family f = MethodFamily(m);
    if (std::find(families.begin(), families.end(), f) == families.end()) families.push_back(f);
  }
  JoinedTable merged;
  for (Family f : families) {
    const JoinedTable table = Join(caches, EnumerateFamily(f, SeedFor(f, family_seed)));
    if (merged.sample_ids.empty()) merged.sample_ids = table.sample_ids;
    for (const auto& [sample, row] : table.rows) merged.rows[sample].insert(row.begin(), row.end());
  }
  return merged;
}

std::vector<double> TrainLlsFromCaches(const std::vector<std::string>& paths) {
  const JoinedTable table = Join(ReadCaches(paths), EnumerateFamily(Family::kIdentity));
  std::vector<double> lls;
  for (const auto& id : table.sample_ids) lls.push_back(table.row(id).at("identity"));
  return lls;
}

int RunScore(const Options& opt) {
  const Family family = ParseFamily(opt.family);
  const TransformFamily members = EnumerateFamily(family, SeedFor(family, opt.family_seed));
  const JoinedTable table = Join(ReadCaches(opt.caches), members);
  const bool conditional = !opt.no_conditional;
  Cutoff cutoff;
  if (conditional) {
    if (opt.train_caches.empty()) throw Error(ErrorKind::kConfig, "conditional scoring needs --train-cache");
    cutoff = FitCutoff(TrainLlsFromCaches(opt.train_caches), ParseCutoffMethod(opt.cutoff), opt.tail_mass);
  }
  std::string csv = "sample_id,identity_ll,tier,score\n";
  for (const auto& id : table.sample_ids) {
    const LlMap& row = table.row(id);
    const double identity = row.at("identity");
    const double lr = family == Family::kIdentity ? identity : LrScore(row, members, id);
    const OodScore s = conditional ? ConditionalScore(identity, lr, cutoff) : Passed(lr);
    csv += id + "," + Num(identity) + "," + (s.tier == Tier::kPassed ? "passed" : "filtered") + "," +
           Num(s.value) + "\n";
  }
  WriteText(fs::path(opt.out) / "scores.csv", csv);
  if (conditional) std::printf("cutoff %s tau %.6f\n", opt.cutoff.c_str(), cutoff.tau);
  std::printf("scored %zu samples\n", table.sample_ids.size());
  return kExitOk;
}

int RunEval(const Options& opt) {
  GridConfig config;
  config.methods = opt.methods;
  config.cutoff = ParseCutoffMethod(opt.cutoff);
  config.tail_mass = opt.tail_mass;
  config.conditional = !opt.no_conditional;
  config.tpr_target = opt.tpr;
  config.n_eval = opt.n_eval;
  config.seed = opt.seed;
  config.family_seed = opt.family_seed;
  for (const auto& m : config.methods) MethodFamily(m);
  if (opt.id.size() != 1) throw Error(ErrorKind::kConfig, "eval takes exactly one --id");
  if (opt.ood.empty()) throw Error(ErrorKind::kConfig, "eval needs at least one --ood");
  if (opt.id_train.empty()) throw Error(ErrorKind::kConfig, "eval needs --id-train for the cutoff");

  IdBlock block;
  if (IsCachePath(opt.id[0])) {
    for (const auto& m : config.methods) {
      if (m == "ic-png" || m == "ic-best" || m == "lrat") {
        throw Error(ErrorKind::kConfig, "method " + m + " needs a built-in model, not caches");
      }
    }
    const auto dataset_of = [](const LikelihoodCache& c) { return c.header.dataset_id; };
    const auto id_caches = ReadCaches({opt.id[0]});
    block.id_dataset = dataset_of(id_caches[0]);
    block.train_lls = TrainLlsFromCaches({opt.id_train});
    block.id_test = ScoresFromTable(block.id_dataset, JoinForMethods(id_caches, config.methods, config.family_seed));
    for (const auto& path : opt.ood) {
      const auto caches = ReadCaches({path});
      block.ood_tests.push_back(
          ScoresFromTable(dataset_of(caches[0]), JoinForMethods(caches, config.methods, config.family_seed)));
    }
  } else {
    if (opt.model.empty()) throw Error(ErrorKind::kConfig, "eval on datasets needs --model");
    const auto shape = ParseShapeFlag(opt.shape);
    const ModelState foreground = LoadModel(opt.model);
    std::optional<ModelState> background;
    if (!opt.background.empty()) background = LoadModel(opt.background);
    const ModelState* bg = background ? &*background : nullptr;
    const Dataset id_test = LoadSource(opt.id[0], shape);
    block.id_dataset = id_test.id();
    block.train_lls = IdentityLls(foreground, LoadSource(opt.id_train, shape));
    block.id_test = ComputeDatasetScores(foreground, bg, id_test, config);
    for (const auto& source : opt.ood) {
      block.ood_tests.push_back(ComputeDatasetScores(foreground, bg, LoadSource(source, shape), config));
    }
  }
  const auto results = EvalGrid({block}, config);
  WriteReports(results, config.seed, opt.out);
  for (const auto& r : results) {
    std::printf("%s vs %s  %-16s auroc %.4f auprc %.4f fpr@%.0f%%tpr %.4f\n", r.id_dataset.c_str(),
                r.ood_dataset.c_str(), r.method.c_str(), r.auroc, r.auprc, 100 * r.tpr_target, r.fpr_at_tpr);
  }
  return kExitOk;
}

int RunProbe(const Options& opt) {
  const auto shape = ParseShapeFlag(opt.shape);
  const ModelState model = LoadModel(opt.model);
  if (opt.kind == "degradation") {
    if (opt.data.size() != 1) throw Error(ErrorKind::kConfig, "degradation probe takes one --data source");
    const Dataset dataset = LoadSource(opt.data[0], shape);
    const std::optional<int> sites = opt.sites > 0 ? std::optional<int>(opt.sites) : std::nullopt;
    const ProbeResult result = DegradationProbe(model, dataset, opt.patch, sites, opt.seed);
    std::string csv = "sample_id,degradation_percent\n";
    for (size_t i = 0; i < result.degradation_percent.size(); ++i) {
      csv += SampleId(i) + "," + Num(result.degradation_percent[i]) + "\n";
    }
    WriteText(fs::path(opt.out) / "probe.csv", csv);
    std::printf("degradation%% q25 %.4f median %.4f q75 %.4f\n", result.q25, result.median, result.q75);
  } else if (opt.kind == "complexity") {
    if (opt.data.empty()) throw Error(ErrorKind::kConfig, "complexity probe needs --data");
    std::vector<Dataset> datasets;
    for (const auto& source : opt.data) datasets.push_back(LoadSource(source, shape));
    WriteText(fs::path(opt.out) / "probe.csv",
              ComplexityCsv(ComplexityVsLlTable(model, datasets, ParseCodec(opt.codec))));
  } else if (opt.kind == "ablation") {
    if (opt.id.size() != 1 || opt.ood.size() != 1) {
      throw Error(ErrorKind::kConfig, "ablation probe needs one --id and one --ood");
    }
    const Dataset id_set = LoadSource(opt.id[0], shape);
    const Dataset ood_set = LoadSource(opt.ood[0], shape);
    const AblationDelta delta = ComputeAblationDelta(model, id_set, ood_set);
    std::string csv = "set,sample_id,delta_ll\n";
    for (size_t i = 0; i < delta.id_deltas.size(); ++i) csv += "id," + SampleId(i) + "," + Num(delta.id_deltas[i]) + "\n";
    for (size_t i = 0; i < delta.ood_deltas.size(); ++i) csv += "ood," + SampleId(i) + "," + Num(delta.ood_deltas[i]) + "\n";
    WriteText(fs::path(opt.out) / "probe.csv", csv);
    std::printf("median |dLL| id %.4f ood %.4f\n", delta.id_median_abs, delta.ood_median_abs);
  } else {
    throw Error(ErrorKind::kConfig, "unknown probe kind '" + opt.kind + "'");
  }
  return kExitOk;
}

double PeakRssMib() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<double>(usage.ru_maxrss) / 1024.0;
}

int RunBench(const Options& opt) {
  if (opt.data.size() != 1) throw Error(ErrorKind::kConfig, "bench takes exactly one --data source");
  const ModelState model = LoadModel(opt.model);
  const Dataset dataset = SampleSubset(LoadSource(opt.data[0], ParseShapeFlag(opt.shape)),
                                       static_cast<size_t>(std::max(1, opt.n)), opt.seed);
  std::string csv = "method,samples,seconds_per_sample,peak_rss_mib\n";
  for (const auto& method : opt.methods) {
    const Family family = MethodFamily(method);
    if (family == Family::kIdentity && method != "ll") {
      throw Error(ErrorKind::kConfig, "bench supports ll and transform-family methods");
    }
    const TransformFamily members = EnumerateFamily(family, SeedFor(family, opt.family_seed));
    const auto start = std::chrono::steady_clock::now();
    double sink = 0.0;
    for (const auto& image : dataset.images()) {
      LlMap lls{{"identity", LogLikelihood(model, image)}};
      for (const auto& t : members.members) lls[t.str()] = LogLikelihood(model, Apply(t, image));
      sink += family == Family::kIdentity ? lls["identity"] : LrScore(lls, members);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double per_sample = seconds / static_cast<double>(dataset.size());
    csv += method + "," + std::to_string(dataset.size()) + "," + Num(per_sample) + "," + Num(PeakRssMib()) + "\n";
    std::printf("%-16s %.6f s/sample  peak %.1f MiB  (checksum %.3f)\n", method.c_str(), per_sample, PeakRssMib(), sink);
  }
  WriteText(fs::path(opt.out) / "bench.csv", csv);
  return kExitOk;
}

int ReportError(const Error& e) {
  std::fprintf(stderr, "pixood: %s: %s\n", ErrorKindName(e.kind()), e.what());
  if (const auto* c = dynamic_cast<const CompletenessError*>(&e)) {
    for (const auto& [sample, transform] : c->missing()) {
      std::fprintf(stderr, "  missing (%s, %s)\n", sample.c_str(), transform.c_str());
    }
  }
  return e.kind() == ErrorKind::kIo ? kExitIo : kExitValidation;
}

int Main(int argc, char** argv) {
  Options opt;
  CLI::App app{"pixood: de-biased likelihood OOD detection toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  const auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Output directory")->required();
    sub->add_option("--seed", opt.seed, "Random seed");
  };
  const auto add_shape = [&](CLI::App* sub) {
    sub->add_option("--shape", opt.shape, "HxWxC target shape for image directories");
  };
  const auto add_family = [&](CLI::App* sub) {
    sub->add_option("--family", opt.family, "Transform family")->check(CLI::IsMember(kFamilyNames));
    sub->add_option("--family-seed", opt.family_seed, "Seed for sampled families");
  };
  const auto add_scoring = [&](CLI::App* sub) {
    sub->add_option("--cutoff", opt.cutoff, "Cutoff method")->check(CLI::IsMember({"mad3", "percentile"}));
    sub->add_option("--tail-mass", opt.tail_mass, "Percentile cutoff tail mass")->check(CLI::Range(0.0, 1.0));
    sub->add_flag("--no-conditional", opt.no_conditional, "Disable the conditional correction");
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset as IDX");
  synth->add_option("--spec", opt.spec, "kind=...,count=...,seed=...,shape=HxWxC[,k=..][,orientation=..]")->required();
  synth->add_option("--name", opt.name, "Output file name");
  add_out(synth);

  auto* train = app.add_subcommand("train", "Train the built-in density model");
  train->add_option("--train", opt.train, "Training dataset source")->required();
  train->add_option("--val", opt.val, "Validation dataset source (default: split off --val-fraction)");
  train->add_option("--val-fraction", opt.val_fraction, "Validation fraction when --val is absent");
  train->add_option("--radius", opt.radius, "Local context radius k");
  train->add_option("--hidden", opt.hidden, "Hidden width");
  train->add_option("--mix", opt.mix, "Mixture components K");
  train->add_option("--epochs", opt.epochs, "Epochs");
  train->add_option("--batch", opt.batch, "Minibatch size");
  train->add_option("--lr", opt.lr, "Learning rate");
  train->add_flag("--no-positional", opt.no_positional, "Drop positional features");
  train->add_flag("--no-long-range", opt.no_long_range, "Drop long-range taps");
  train->add_option("--long-range-fraction", opt.long_range_fraction, "Hidden units reserved for long-range inputs");
  train->add_option("--mutate", opt.mutate, "Train on mutated data (background model rate)");
  add_shape(train);
  add_out(train);

  auto* ll = app.add_subcommand("ll", "Write a likelihood cache for a dataset under a transform family");
  ll->add_option("--model", opt.model, "Model checkpoint")->required();
  ll->add_option("--data", opt.data, "Dataset source")->required();
  ll->add_option("--model-id", opt.model_id, "model_id recorded in the cache");
  add_family(ll);
  add_shape(ll);
  add_out(ll);

  auto* score = app.add_subcommand("score", "Score samples from likelihood caches");
  score->add_option("--cache", opt.caches, "Cache files for the scored dataset")->required();
  score->add_option("--train-cache", opt.train_caches, "Caches with training identity LLs (cutoff)");
  add_family(score);
  add_scoring(score);
  add_out(score);

  auto* eval = app.add_subcommand("eval", "Evaluate OOD detection methods");
  eval->add_option("--id", opt.id, "ID test dataset source or cache")->required();
  eval->add_option("--id-train", opt.id_train, "ID training dataset source or cache (cutoff)");
  eval->add_option("--ood", opt.ood, "OOD dataset source or cache (repeatable)");
  eval->add_option("--model", opt.model, "Foreground model checkpoint");
  eval->add_option("--background", opt.background, "Background model checkpoint (lrat)");
  eval->add_option("--methods", opt.methods, "Comma-separated methods")->delimiter(',');
  eval->add_option("--family-seed", opt.family_seed, "Seed for sampled families");
  eval->add_option("--n-eval", opt.n_eval, "Evaluation subset size per dataset");
  eval->add_option("--tpr", opt.tpr, "TPR target for FPR@TPR")->check(CLI::Range(0.0, 1.0));
  add_scoring(eval);
  add_shape(eval);
  add_out(eval);

  auto* probe = app.add_subcommand("probe", "Run an analysis probe");
  probe->add_option("--model", opt.model, "Model checkpoint")->required();
  probe->add_option("--kind", opt.kind, "Probe kind")->check(CLI::IsMember({"degradation", "complexity", "ablation"}));
  probe->add_option("--data", opt.data, "Dataset source(s)");
  probe->add_option("--id", opt.id, "ID dataset source (ablation)");
  probe->add_option("--ood", opt.ood, "OOD dataset source (ablation)");
  probe->add_option("--patch", opt.patch, "Perturbation patch size");
  probe->add_option("--sites", opt.sites, "Sites per image (0 = every interior site)");
  probe->add_option("--codec", opt.codec, "Codec for the complexity probe")->check(CLI::IsMember({"png", "deflate-raw"}));
  add_shape(probe);
  add_out(probe);

  auto* bench = app.add_subcommand("bench", "Time per-sample scoring");
  bench->add_option("--model", opt.model, "Model checkpoint")->required();
  bench->add_option("--data", opt.data, "Dataset source")->required();
  bench->add_option("--methods", opt.methods, "Comma-separated methods")->delimiter(',');
  bench->add_option("--n", opt.n, "Samples to time");
  bench->add_option("--family-seed", opt.family_seed, "Seed for sampled families");
  add_shape(bench);
  add_out(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const std::map<const CLI::App*, int (*)(const Options&)> handlers = {
      {synth, RunSynth}, {train, RunTrain}, {ll, RunLl},       {score, RunScore},
      {eval, RunEval},   {probe, RunProbe}, {bench, RunBench}};
  const CLI::App* chosen = app.get_subcommands().front();
  try {
    PrepareOutput(*chosen, opt, argc, argv);
    return handlers.at(chosen)(opt);
  } catch (const Error& e) {
    return ReportError(e);
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "pixood: io error: %s\n", e.what());
    return kExitIo;
  }
}

}  // namespace
}  // namespace pixood

int main(int argc, char** argv) { return pixood::Main(argc, argv); }
