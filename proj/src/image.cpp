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
#include <cctype>
#include <numeric>
#include <sstream>

#include "pixood/complexity.hpp"
#include "pixood/error.hpp"
#include "pixood/image.hpp"
#include "pixood/rng.hpp"
#include "io_util.hpp"

namespace pixood {

std::string ToString(const Shape& shape) {
  std::ostringstream out;
  out << shape.height << "x" << shape.width << "x" << shape.channels;
  return out.str();
}

ImageTensor::ImageTensor(Shape shape) : ImageTensor(shape, std::vector<uint8_t>(shape.size())) {}

ImageTensor::ImageTensor(Shape shape, std::vector<uint8_t> data)
    : shape_(shape), data_(std::move(data)) {
  if (shape.height <= 0 || shape.width <= 0) {
    throw Error(ErrorKind::kShape, "image dimensions must be positive, got " + ToString(shape));
  }
  if (shape.channels != 1 && shape.channels != 3) {
    throw Error(ErrorKind::kShape, "image must have 1 or 3 channels, got " + ToString(shape));
  }
  if (data_.size() != shape.size()) {
    throw Error(ErrorKind::kLength, "image data length " + std::to_string(data_.size()) +
                                        " does not match shape " + ToString(shape));
  }
}

const char* SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "test";
}

Dataset::Dataset(std::string id, std::vector<ImageTensor> images, Split split)
    : id_(std::move(id)), images_(std::move(images)), split_(split) {
  if (images_.empty()) throw Error(ErrorKind::kConfig, "dataset '" + id_ + "' is empty");
  for (const auto& image : images_) {
    if (image.shape() != images_.front().shape()) {
      throw Error(ErrorKind::kShape, "dataset '" + id_ + "' mixes shapes " +
                                         ToString(images_.front().shape()) + " and " +
                                         ToString(image.shape()));
    }
  }
}

Dataset Dataset::Prefix(size_t n) const {
  if (n >= images_.size()) return *this;
  return Dataset(id_, std::vector<ImageTensor>(images_.begin(), images_.begin() + n), split_);
}

Dataset Dataset::WithId(std::string id) const { return Dataset(std::move(id), images_, split_); }

namespace {

std::vector<size_t> ShuffledIndices(size_t n, uint64_t seed) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.Shuffle(order);
  return order;
}

}  // namespace

std::pair<Dataset, Dataset> SplitDataset(const Dataset& dataset, double val_fraction,
                                         uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "val_fraction must lie in (0, 1)");
  }
  const auto n_val = static_cast<size_t>(static_cast<double>(dataset.size()) * val_fraction);
  if (n_val == 0 || n_val == dataset.size()) {
    throw Error(ErrorKind::kConfig, "split of " + std::to_string(dataset.size()) +
                                        " images at fraction " + std::to_string(val_fraction) +
                                        " leaves an empty side");
  }
  auto order = ShuffledIndices(dataset.size(), seed);
  // Keep original relative order within each side.
  std::vector<size_t> val_idx(order.begin(), order.begin() + n_val);
  std::vector<size_t> train_idx(order.begin() + n_val, order.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::vector<ImageTensor> train, val;
  for (size_t i : train_idx) train.push_back(dataset[i]);
  for (size_t i : val_idx) val.push_back(dataset[i]);
  return {Dataset(dataset.id(), std::move(train), Split::kTrain),
          Dataset(dataset.id(), std::move(val), Split::kVal)};
}

Dataset SampleSubset(const Dataset& dataset, size_t n, uint64_t seed) {
  if (n >= dataset.size()) return dataset;
  auto order = ShuffledIndices(dataset.size(), seed);
  std::vector<ImageTensor> images;
  images.reserve(n);
  for (size_t i = 0; i < n; ++i) images.push_back(dataset[order[i]]);
  return Dataset(dataset.id(), std::move(images), dataset.split());
}

ImageTensor ResizeNearest(const ImageTensor& image, int height, int width) {
  if (image.height() == height && image.width() == width) return image;
  ImageTensor out(Shape{height, width, image.channels()});
  for (int r = 0; r < height; ++r) {
    const int src_r = static_cast<int>(static_cast<int64_t>(r) * image.height() / height);
    for (int c = 0; c < width; ++c) {
      const int src_c = static_cast<int>(static_cast<int64_t>(c) * image.width() / width);
      for (int ch = 0; ch < image.channels(); ++ch) out.at(r, c, ch) = image.at(src_r, src_c, ch);
    }
  }
  return out;
}

namespace {

ImageTensor ConvertChannels(const ImageTensor& image, int channels) {
  if (image.channels() == channels) return image;
  ImageTensor out(Shape{image.height(), image.width(), channels});
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        out.at(r, c, ch) = image.at(r, c, 0);
      }
    }
  }
  return out;
}

// Binary netpbm (P5 gray / P6 RGB, maxval 255).
ImageTensor ReadNetpbm(const std::vector<uint8_t>& bytes, const std::string& name) {
  std::string header;
  size_t pos = 0;
  std::vector<long> fields;
  std::string magic;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto token = [&] {
    skip_space();
    std::string t;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) t.push_back(static_cast<char>(bytes[pos++]));
    return t;
  };
  magic = token();
  if (magic != "P5" && magic != "P6") throw Error(ErrorKind::kFormat, name + ": not a binary PGM/PPM");
  try {
    for (int i = 0; i < 3; ++i) fields.push_back(std::stol(token()));
  } catch (const std::exception&) {
    throw Error(ErrorKind::kFormat, name + ": malformed netpbm header");
  }
  ++pos;  // single whitespace after maxval
  if (fields[2] != 255) throw Error(ErrorKind::kUnsupportedType, name + ": only maxval 255 supported");
  const Shape shape{static_cast<int>(fields[1]), static_cast<int>(fields[0]), magic == "P5" ? 1 : 3};
  if (bytes.size() < pos + shape.size()) throw Error(ErrorKind::kLength, name + ": truncated pixel data");
  return ImageTensor(shape, std::vector<uint8_t>(bytes.begin() + static_cast<long>(pos),
                                                 bytes.begin() + static_cast<long>(pos + shape.size())));
}

}  // namespace

Dataset LoadImageDirectory(const std::filesystem::path& dir, Shape target) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::kIo, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".pgm" || ext == ".ppm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  std::vector<ImageTensor> images;
  for (const auto& file : files) {
    const auto bytes = ReadFileBytes(file);
    const auto ext = file.extension().string();
    ImageTensor image = (ext == ".png" || ext == ".PNG") ? DecodePng(bytes) : ReadNetpbm(bytes, file.string());
    image = ResizeNearest(ConvertChannels(image, target.channels), target.height, target.width);
    images.push_back(std::move(image));
  }
  return Dataset(dir.filename().string(), std::move(images));
}

}  // namespace pixood
