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

#include "pixood/llcache.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <set>

#include <json.hpp>

#include "pixood/error.hpp"

namespace pixood {

using nlohmann::json;

namespace {

std::string ShortestDouble(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void ValidateHeader(const CacheHeader& header) {
  if (header.transform_ids.empty()) throw Error(ErrorKind::kValidation, "cache header lists no transform ids");
  std::set<std::string> seen;
  for (const auto& id : header.transform_ids) {
    if (!seen.insert(id).second) throw Error(ErrorKind::kValidation, "duplicate transform id '" + id + "'");
  }
  if (!seen.contains("identity")) throw Error(ErrorKind::kValidation, "cache header must include 'identity'");
}

}  // namespace

std::string SampleId(size_t index) { return std::to_string(index); }

void WriteCache(const CacheHeader& header, const std::vector<CacheRecord>& records, std::ostream& sink) {
  ValidateHeader(header);
  const std::set<std::string> allowed(header.transform_ids.begin(), header.transform_ids.end());
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& record = records[i];
    if (!allowed.contains(record.transform_id)) {
      throw Error(ErrorKind::kValidation, "record " + std::to_string(i) + ": transform id '" +
                                              record.transform_id + "' not in header");
    }
    if (!std::isfinite(record.loglik)) {
      throw Error(ErrorKind::kValidation, "record " + std::to_string(i) + ": non-finite loglik");
    }
  }
  const json head = {{"format", kCacheFormat},
                     {"model_id", header.model_id},
                     {"dataset_id", header.dataset_id},
                     {"log_base", kCacheLogBase},
                     {"transform_ids", header.transform_ids}};
  sink << head.dump() << '\n';
  for (const auto& record : records) {
    sink << "{\"sample_id\":" << json(record.sample_id).dump()
         << ",\"transform_id\":" << json(record.transform_id).dump()
         << ",\"loglik\":" << ShortestDouble(record.loglik) << "}\n";
  }
  if (!sink) throw Error(ErrorKind::kIo, "failed writing likelihood cache");
}

void WriteCacheFile(const LikelihoodCache& cache, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  WriteCache(cache.header, cache.records, out);
}

LikelihoodCache ReadCache(std::istream& source) {
  static const std::regex kNonFiniteToken(R"re("loglik"\s*:\s*"?[-+]?(nan|NaN|inf|Inf|infinity|Infinity)"?)re");
  LikelihoodCache cache;
  std::string line;
  size_t line_no = 0;
  bool have_header = false;
  std::set<std::string> allowed;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (have_header && std::regex_search(line, kNonFiniteToken)) {
      throw Error(ErrorKind::kValue, where + "non-finite loglik");
    }
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, where + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::kParse, where + "expected a JSON object");
    if (!have_header) {
      if (!doc.contains("format") || !doc["format"].is_string()) {
        throw Error(ErrorKind::kParse, where + "header lacks a format string");
      }
      if (doc["format"] != kCacheFormat) {
        throw Error(ErrorKind::kVersion, where + "unsupported cache format '" +
                                             doc["format"].get<std::string>() + "'");
      }
      try {
        if (doc.at("log_base").get<std::string>() != kCacheLogBase) {
          throw Error(ErrorKind::kValidation, where + "log_base must be \"e\"");
        }
        cache.header.model_id = doc.at("model_id").get<std::string>();
        cache.header.dataset_id = doc.at("dataset_id").get<std::string>();
        cache.header.transform_ids = doc.at("transform_ids").get<std::vector<std::string>>();
      } catch (const json::exception& e) {
        throw Error(ErrorKind::kParse, where + e.what());
      }
      ValidateHeader(cache.header);
      allowed.insert(cache.header.transform_ids.begin(), cache.header.transform_ids.end());
      have_header = true;
      continue;
    }
    CacheRecord record;
    try {
      if (doc.size() != 3) throw Error(ErrorKind::kParse, where + "record must have exactly 3 keys");
      record.sample_id = doc.at("sample_id").get<std::string>();
      record.transform_id = doc.at("transform_id").get<std::string>();
      const auto& value = doc.at("loglik");
      if (!value.is_number()) throw Error(ErrorKind::kParse, where + "loglik must be a number");
      record.loglik = value.get<double>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, where + e.what());
    }
    if (!std::isfinite(record.loglik)) throw Error(ErrorKind::kValue, where + "non-finite loglik");
    if (!allowed.contains(record.transform_id)) {
      throw Error(ErrorKind::kValidation, where + "transform id '" + record.transform_id + "' not in header");
    }
    cache.records.push_back(std::move(record));
  }
  if (!have_header) throw Error(ErrorKind::kParse, "empty likelihood cache");
  return cache;
}

LikelihoodCache ReadCacheFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return ReadCache(in);
}

JoinedTable Join(const std::vector<LikelihoodCache>& caches, const TransformFamily& required) {
  if (caches.empty()) throw Error(ErrorKind::kJoin, "nothing to join");
  const auto& first = caches.front().header;
  for (const auto& cache : caches) {
    if (cache.header.model_id != first.model_id) {
      throw Error(ErrorKind::kJoin, "model_id mismatch: '" + first.model_id + "' vs '" +
                                        cache.header.model_id + "'");
    }
    if (cache.header.dataset_id != first.dataset_id) {
      throw Error(ErrorKind::kJoin, "dataset_id mismatch: '" + first.dataset_id + "' vs '" +
                                        cache.header.dataset_id + "'");
    }
  }
  std::vector<std::string> wanted = {"identity"};
  for (const auto& id : required.ids()) wanted.push_back(id);
  const std::set<std::string> wanted_set(wanted.begin(), wanted.end());

  JoinedTable table;
  for (const auto& cache : caches) {
    for (const auto& record : cache.records) {
      auto [it, inserted] = table.rows.try_emplace(record.sample_id);
      if (inserted) table.sample_ids.push_back(record.sample_id);
      if (!wanted_set.contains(record.transform_id)) continue;
      auto [entry, fresh] = it->second.emplace(record.transform_id, record.loglik);
      if (!fresh && entry->second != record.loglik) {
        throw Error(ErrorKind::kJoin, "conflicting logliks for (" + record.sample_id + ", " +
                                          record.transform_id + ")");
      }
    }
  }
  MissingEntries missing;
  for (const auto& sample : table.sample_ids) {
    const auto& row = table.rows.at(sample);
    for (const auto& id : wanted) {
      if (!row.contains(id)) missing.emplace_back(sample, id);
    }
  }
  if (!missing.empty()) throw CompletenessError(std::move(missing));
  return table;
}

LikelihoodCache ComputeCache(const LikelihoodModel& model, const Dataset& dataset,
                             const TransformFamily& family) {
  LikelihoodCache cache;
  cache.header.model_id = model.model_id();
  cache.header.dataset_id = dataset.id();
  cache.header.transform_ids = {"identity"};
  for (const auto& id : family.ids()) cache.header.transform_ids.push_back(id);
  for (size_t i = 0; i < dataset.size(); ++i) {
    const auto& image = dataset[i];
    cache.records.push_back({SampleId(i), "identity", model.LogLikelihood(image)});
    for (const auto& tid : family.members) {
      cache.records.push_back({SampleId(i), tid.str(), model.LogLikelihood(Apply(tid, image))});
    }
  }
  return cache;
}

}  // namespace pixood
