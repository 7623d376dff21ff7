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

#ifndef PIXOOD_LLCACHE_HPP_
#define PIXOOD_LLCACHE_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pixood/image.hpp"
#include "pixood/model.hpp"
#include "pixood/transforms.hpp"

namespace pixood {

// "llcache/1": newline-delimited JSON. Line 1 is the header object, every
// further line one {"sample_id", "transform_id", "loglik"} record. Log-
// likelihoods are natural-log nats written in shortest round-trip form.

inline constexpr const char* kCacheFormat = "llcache/1";
inline constexpr const char* kCacheLogBase = "e";

struct CacheHeader {
  std::string model_id;
  std::string dataset_id;
  std::vector<std::string> transform_ids;

  bool operator==(const CacheHeader&) const = default;
};

struct CacheRecord {
  std::string sample_id;
  std::string transform_id;
  double loglik = 0.0;

  bool operator==(const CacheRecord&) const = default;
};

struct LikelihoodCache {
  CacheHeader header;
  std::vector<CacheRecord> records;
};

// Validates everything first (kValidation) and only then writes.
void WriteCache(const CacheHeader& header, const std::vector<CacheRecord>& records, std::ostream& sink);
void WriteCacheFile(const LikelihoodCache& cache, const std::filesystem::path& path);

// Strict parse. kVersion for a wrong format tag, kParse (with 1-based line
// number) for malformed lines, kValue for non-finite log-likelihoods.
LikelihoodCache ReadCache(std::istream& source);
LikelihoodCache ReadCacheFile(const std::filesystem::path& path);

// transform_id -> loglik for one sample.
using LlMap = std::map<std::string, double>;

struct JoinedTable {
  std::vector<std::string> sample_ids;  // first-appearance order
  std::map<std::string, LlMap> rows;

  const LlMap& row(const std::string& sample_id) const { return rows.at(sample_id); }
};

// Merges caches of one (model, dataset) pair, keeping only identity plus the
// required family. kJoin on mismatched ids or conflicting duplicates;
// CompletenessError listing every missing (sample, transform) pair.
JoinedTable Join(const std::vector<LikelihoodCache>& caches, const TransformFamily& required);

// Canonical sample ids: the zero-based index within the dataset.
std::string SampleId(size_t index);

// Evaluates `model` on every image of `dataset` under identity and each
// member of `family`.
LikelihoodCache ComputeCache(const LikelihoodModel& model, const Dataset& dataset,
                             const TransformFamily& family);

}  // namespace pixood

#endif  // PIXOOD_LLCACHE_HPP_
