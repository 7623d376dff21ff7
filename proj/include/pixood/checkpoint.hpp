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

#ifndef PIXOOD_CHECKPOINT_HPP_
#define PIXOOD_CHECKPOINT_HPP_

#include <filesystem>
#include <string>

#include "pixood/model.hpp"

namespace pixood {

inline constexpr const char* kCheckpointFormat = "pixood-model/1";

// JSON container: format tag, shape, config, weights and training history.
// Doubles use the shortest round-trip decimal form, so a save/load cycle
// reproduces every parameter bit-exactly.
std::string SerializeModel(const ModelState& model);
ModelState DeserializeModel(const std::string& text);

void SaveModel(const ModelState& model, const std::filesystem::path& path);
ModelState LoadModel(const std::filesystem::path& path);

}  // namespace pixood

#endif  // PIXOOD_CHECKPOINT_HPP_
