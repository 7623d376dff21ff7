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

#include "pixood/checkpoint.hpp"

#include <json.hpp>

#include "io_util.hpp"
#include "pixood/error.hpp"

namespace pixood {

using nlohmann::json;

std::string SerializeModel(const ModelState& model) {
  const ModelConfig& config = model.config();
  json taps = json::array();
  for (const auto& t : model.long_range_offsets()) taps.push_back({t.row, t.col});
  json history = json::array();
  for (const auto& h : model.history()) {
    history.push_back({{"epoch", h.epoch}, {"train_nll", h.train_nll}, {"val_nll", h.val_nll}});
  }
  const json doc = {
      {"format", kCheckpointFormat},
      {"shape", {model.shape().height, model.shape().width, model.shape().channels}},
      {"config",
       {{"context_radius", config.context_radius},
        {"long_range_taps", taps},
        {"positional_features", config.positional_features},
        {"hidden_width", config.hidden_width},
        {"num_mix", config.num_mix},
        {"long_range_hidden_fraction", config.long_range_hidden_fraction},
        {"learning_rate", config.learning_rate},
        {"epochs", config.epochs},
        {"batch_size", config.batch_size},
        {"seed", config.seed}}},
      {"weights", model.params()},
      {"history", history}};
  return doc.dump(1) + "\n";
}

ModelState DeserializeModel(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("checkpoint: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kCheckpointFormat) {
      throw Error(ErrorKind::kVersion, "checkpoint format '" + doc.at("format").get<std::string>() +
                                           "' is not " + kCheckpointFormat);
    }
    const auto& s = doc.at("shape");
    const Shape shape{s.at(0).get<int>(), s.at(1).get<int>(), s.at(2).get<int>()};
    const auto& c = doc.at("config");
    ModelConfig config;
    config.context_radius = c.at("context_radius").get<int>();
    std::vector<Offset> taps;
    for (const auto& t : c.at("long_range_taps")) taps.push_back({t.at(0).get<int>(), t.at(1).get<int>()});
    config.long_range_taps = taps;
    config.positional_features = c.at("positional_features").get<bool>();
    config.hidden_width = c.at("hidden_width").get<int>();
    config.num_mix = c.at("num_mix").get<int>();
    config.long_range_hidden_fraction = c.at("long_range_hidden_fraction").get<double>();
    config.learning_rate = c.at("learning_rate").get<double>();
    config.epochs = c.at("epochs").get<int>();
    config.batch_size = c.at("batch_size").get<int>();
    config.seed = c.at("seed").get<uint64_t>();
    std::vector<TrainingEpoch> history;
    for (const auto& h : doc.at("history")) {
      history.push_back({h.at("epoch").get<int>(), h.at("train_nll").get<double>(),
                         h.at("val_nll").get<double>()});
    }
    return ModelState(config, shape, doc.at("weights").get<std::vector<double>>(), std::move(history));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("checkpoint: ") + e.what());
  }
}

void SaveModel(const ModelState& model, const std::filesystem::path& path) {
  WriteFileBytes(path, SerializeModel(model));
}

ModelState LoadModel(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return DeserializeModel(std::string(bytes.begin(), bytes.end()));
}

}  // namespace pixood
