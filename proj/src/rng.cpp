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

#include "pixood/rng.hpp"

#include <limits>
#include <sstream>

#include "pixood/error.hpp"

namespace pixood {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kLength: return "length error";
    case ErrorKind::kUnsupportedType: return "unsupported-type error";
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kDivergence: return "training-divergence error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kVersion: return "version error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kValue: return "value error";
    case ErrorKind::kJoin: return "join error";
    case ErrorKind::kCompleteness: return "completeness error";
    case ErrorKind::kCodec: return "codec error";
    case ErrorKind::kUndefinedRatio: return "undefined-ratio error";
    case ErrorKind::kIo: return "I/O error";
  }
  return "error";
}

namespace {

std::string DescribeMissing(const MissingEntries& missing) {
  std::ostringstream out;
  out << "missing " << missing.size() << " likelihood entr"
      << (missing.size() == 1 ? "y" : "ies") << ":";
  for (const auto& [sample, transform] : missing) {
    out << " (" << sample << ", " << transform << ")";
  }
  return out.str();
}

}  // namespace

CompletenessError::CompletenessError(MissingEntries missing)
    : Error(ErrorKind::kCompleteness, DescribeMissing(missing)),
      missing_(std::move(missing)) {}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

int64_t Rng::UniformInt(int64_t lo, int64_t hi) {
  if (hi < lo) throw Error(ErrorKind::kDomain, "UniformInt: empty range");
  const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo);
  if (span == std::numeric_limits<uint64_t>::max()) {
    return static_cast<int64_t>(NextU64());
  }
  const uint64_t range = span + 1;
  // Largest multiple of `range` representable; draws above it are rejected.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         (std::numeric_limits<uint64_t>::max() % range + 1) % range;
  uint64_t draw;
  do {
    draw = NextU64();
  } while (draw > limit);
  return lo + static_cast<int64_t>(draw % range);
}

double Rng::Uniform01() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

Rng Rng::Derive(uint64_t stream) const {
  return Rng(SplitMix64(seed_ ^ SplitMix64(stream + 0x632be59bd9b4e019ULL)));
}

}  // namespace pixood
