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

#ifndef PIXOOD_ERROR_HPP_
#define PIXOOD_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pixood {

enum class ErrorKind {
  kFormat,
  kLength,
  kUnsupportedType,
  kConfig,
  kShape,
  kDomain,
  kDivergence,
  kValidation,
  kVersion,
  kParse,
  kValue,
  kJoin,
  kCompleteness,
  kCodec,
  kUndefinedRatio,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// (sample_id, transform_id) pairs that a consumer required but did not find.
using MissingEntries = std::vector<std::pair<std::string, std::string>>;

class CompletenessError : public Error {
 public:
  explicit CompletenessError(MissingEntries missing);

  const MissingEntries& missing() const { return missing_; }

 private:
  MissingEntries missing_;
};

}  // namespace pixood

#endif  // PIXOOD_ERROR_HPP_
