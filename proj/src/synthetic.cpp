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

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "pixood/error.hpp"
#include "pixood/image.hpp"
#include "pixood/rng.hpp"

namespace pixood {

namespace {

constexpr int kRampLow = 32;
constexpr int kRampHigh = 224;
constexpr int kJitter = 16;
constexpr int kSpriteCell = 8;
constexpr int kSpriteSize = 3;

uint8_t Clamp8(int value) { return static_cast<uint8_t>(std::clamp(value, 0, 255)); }

uint8_t Jittered(int base, Rng& rng) {
  return Clamp8(base + static_cast<int>(rng.UniformInt(-kJitter, kJitter)));
}

ImageTensor Noise(const Shape& shape, Rng& rng) {
  ImageTensor image(shape);
  for (auto& v : image.mutable_data()) v = static_cast<uint8_t>(rng.UniformInt(0, 255));
  return image;
}

ImageTensor Constant(const Shape& shape, const std::vector<uint8_t>& colour) {
  ImageTensor image(shape);
  auto data = image.mutable_data();
  for (size_t i = 0; i < data.size(); ++i) data[i] = colour[i % shape.channels];
  return image;
}

ImageTensor ColorSeq(const Shape& shape, int k, Rng& rng) {
  std::vector<uint8_t> palette(static_cast<size_t>(k) * shape.channels);
  for (auto& v : palette) v = static_cast<uint8_t>(rng.UniformInt(0, 255));
  ImageTensor image(shape);
  auto data = image.mutable_data();
  for (size_t pixel = 0; pixel < shape.pixels(); ++pixel) {
    const size_t entry = pixel % static_cast<size_t>(k);
    for (int ch = 0; ch < shape.channels; ++ch) {
      data[pixel * shape.channels + ch] = palette[entry * shape.channels + ch];
    }
  }
  return image;
}

int RampBase(int position, int extent) {
  if (extent == 1) return kRampLow;
  return static_cast<int>(std::lround(kRampLow + static_cast<double>(kRampHigh - kRampLow) *
                                                     position / (extent - 1)));
}

ImageTensor OrientedGradient(const Shape& shape, Orientation orientation, Rng& rng) {
  ImageTensor image(shape);
  for (int r = 0; r < shape.height; ++r) {
    for (int c = 0; c < shape.width; ++c) {
      const int base = orientation == Orientation::kVertical ? RampBase(r, shape.height)
                                                             : RampBase(c, shape.width);
      for (int ch = 0; ch < shape.channels; ++ch) image.at(r, c, ch) = Jittered(base, rng);
    }
  }
  return image;
}

// Bright 3x3 block centred in one 8x8 cell of the top half.
ImageTensor SpriteGrid(const Shape& shape, Rng& rng) {
  const int cells_x = std::max(1, shape.width / kSpriteCell);
  const int cells_y = std::max(1, (shape.height / 2) / kSpriteCell);
  const int cell = static_cast<int>(rng.UniformInt(0, int64_t{cells_x} * cells_y - 1));
  const int top = (cell / cells_x) * kSpriteCell + (kSpriteCell - kSpriteSize) / 2;
  const int left = (cell % cells_x) * kSpriteCell + (kSpriteCell - kSpriteSize) / 2;
  ImageTensor image(shape);
  for (int r = 0; r < shape.height; ++r) {
    for (int c = 0; c < shape.width; ++c) {
      const bool lit = r >= top && r < top + kSpriteSize && c >= left && c < left + kSpriteSize;
      for (int ch = 0; ch < shape.channels; ++ch) {
        image.at(r, c, ch) = Jittered(lit ? kRampHigh : kRampLow, rng);
      }
    }
  }
  return image;
}

const char* KindName(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kNoise: return "noise";
    case SyntheticKind::kConstant: return "constant";
    case SyntheticKind::kColorSeq: return "colorseq";
    case SyntheticKind::kOrientedGradient: return "oriented-gradient";
    case SyntheticKind::kSpriteGrid: return "sprite-grid";
  }
  return "noise";
}

}  // namespace

Dataset GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.count < 1) throw Error(ErrorKind::kConfig, "synthetic count must be >= 1");
  if (spec.kind == SyntheticKind::kColorSeq && spec.seq_len < 1) {
    throw Error(ErrorKind::kConfig, "colorseq needs K >= 1");
  }
  const Rng root(spec.seed);
  std::vector<ImageTensor> images;
  images.reserve(static_cast<size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    Rng rng = root.Derive(static_cast<uint64_t>(i));
    switch (spec.kind) {
      case SyntheticKind::kNoise:
        images.push_back(Noise(spec.shape, rng));
        break;
      case SyntheticKind::kConstant: {
        std::vector<uint8_t> colour(static_cast<size_t>(spec.shape.channels));
        for (auto& v : colour) {
          v = spec.enumerate ? static_cast<uint8_t>(i % 256) : static_cast<uint8_t>(rng.UniformInt(0, 255));
        }
        images.push_back(Constant(spec.shape, colour));
        break;
      }
      case SyntheticKind::kColorSeq:
        images.push_back(ColorSeq(spec.shape, spec.seq_len, rng));
        break;
      case SyntheticKind::kOrientedGradient:
        images.push_back(OrientedGradient(spec.shape, spec.orientation, rng));
        break;
      case SyntheticKind::kSpriteGrid:
        images.push_back(SpriteGrid(spec.shape, rng));
        break;
    }
  }
  return Dataset(ToString(spec), std::move(images));
}

SyntheticSpec ParseSyntheticSpec(const std::string& text) {
  SyntheticSpec spec;
  std::map<std::string, std::string> fields;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::kConfig, "bad synthetic field '" + item + "'");
    fields[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = fields.find(key);
    if (it == fields.end()) return std::nullopt;
    std::string value = it->second;
    fields.erase(it);
    return value;
  };
  try {
    if (auto kind = take("kind")) {
      static const std::map<std::string, SyntheticKind> kKinds = {
          {"noise", SyntheticKind::kNoise},
          {"constant", SyntheticKind::kConstant},
          {"colorseq", SyntheticKind::kColorSeq},
          {"oriented-gradient", SyntheticKind::kOrientedGradient},
          {"sprite-grid", SyntheticKind::kSpriteGrid}};
      auto it = kKinds.find(*kind);
      if (it == kKinds.end()) throw Error(ErrorKind::kConfig, "unknown synthetic kind '" + *kind + "'");
      spec.kind = it->second;
    }
    if (auto k = take("k")) spec.seq_len = std::stoi(*k);
    if (auto count = take("count")) spec.count = std::stoi(*count);
    if (auto seed = take("seed")) spec.seed = std::stoull(*seed);
    if (auto e = take("enumerate")) spec.enumerate = (*e == "1" || *e == "true");
    if (auto o = take("orientation")) {
      if (*o == "vertical") {
        spec.orientation = Orientation::kVertical;
      } else if (*o == "horizontal") {
        spec.orientation = Orientation::kHorizontal;
      } else {
        throw Error(ErrorKind::kConfig, "unknown orientation '" + *o + "'");
      }
    }
    if (auto shape = take("shape")) {
      char x1 = 0, x2 = 0;
      std::istringstream in(*shape);
      in >> spec.shape.height >> x1 >> spec.shape.width >> x2 >> spec.shape.channels;
      if (!in || x1 != 'x' || x2 != 'x') throw Error(ErrorKind::kConfig, "bad shape '" + *shape + "'");
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kConfig, "malformed synthetic spec '" + text + "'");
  }
  if (!fields.empty()) {
    throw Error(ErrorKind::kConfig, "unknown synthetic field '" + fields.begin()->first + "'");
  }
  return spec;
}

std::string ToString(const SyntheticSpec& spec) {
  std::ostringstream out;
  out << "kind=" << KindName(spec.kind);
  if (spec.kind == SyntheticKind::kColorSeq) out << ",k=" << spec.seq_len;
  if (spec.kind == SyntheticKind::kOrientedGradient) {
    out << ",orientation=" << (spec.orientation == Orientation::kVertical ? "vertical" : "horizontal");
  }
  if (spec.enumerate) out << ",enumerate=1";
  out << ",count=" << spec.count << ",seed=" << spec.seed << ",shape=" << ToString(spec.shape);
  return out.str();
}

}  // namespace pixood
