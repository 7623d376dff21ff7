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

#ifndef PIXOOD_IMAGE_HPP_
#define PIXOOD_IMAGE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace pixood {

struct Shape {
  int height = 0;
  int width = 0;
  int channels = 0;

  size_t pixels() const { return static_cast<size_t>(height) * width; }
  size_t size() const { return pixels() * channels; }

  auto operator<=>(const Shape&) const = default;
};

std::string ToString(const Shape& shape);

// H x W x C image of 8-bit subpixels, row-major, channel-last.
class ImageTensor {
 public:
  ImageTensor() = default;
  // Zero-filled image. Channels must be 1 or 3.
  explicit ImageTensor(Shape shape);
  ImageTensor(Shape shape, std::vector<uint8_t> data);

  const Shape& shape() const { return shape_; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  int channels() const { return shape_.channels; }

  std::span<const uint8_t> data() const { return data_; }
  std::span<uint8_t> mutable_data() { return data_; }

  size_t index(int row, int col, int channel) const {
    return (static_cast<size_t>(row) * shape_.width + col) * shape_.channels + channel;
  }
  uint8_t at(int row, int col, int channel) const { return data_[index(row, col, channel)]; }
  uint8_t& at(int row, int col, int channel) { return data_[index(row, col, channel)]; }

  bool operator==(const ImageTensor&) const = default;

 private:
  Shape shape_;
  std::vector<uint8_t> data_;
};

enum class Split { kTrain, kVal, kTest };

const char* SplitName(Split split);

// Non-empty, shape-homogeneous ordered image collection.
class Dataset {
 public:
  Dataset(std::string id, std::vector<ImageTensor> images, Split split = Split::kTest);

  const std::string& id() const { return id_; }
  Split split() const { return split_; }
  const std::vector<ImageTensor>& images() const { return images_; }
  const ImageTensor& operator[](size_t i) const { return images_[i]; }
  size_t size() const { return images_.size(); }
  const Shape& shape() const { return images_.front().shape(); }

  // First `n` images (all of them when n >= size()).
  Dataset Prefix(size_t n) const;
  Dataset WithId(std::string id) const;

 private:
  std::string id_;
  std::vector<ImageTensor> images_;
  Split split_;
};

// Deterministic disjoint partition into (train, validation); the validation
// part has floor(size * val_fraction) images.
std::pair<Dataset, Dataset> SplitDataset(const Dataset& dataset, double val_fraction,
                                         uint64_t seed);

// Seeded shuffle, then the first n images ("n images sampled at random").
Dataset SampleSubset(const Dataset& dataset, size_t n, uint64_t seed);

// --- IDX ingestion -----------------------------------------------------------

// Parses an IDX unsigned-byte stream. 3-D streams (N, H, W) give grayscale
// images; 4-D streams (N, H, W, C) give C-channel images; 1-D label streams
// parse but carry no images and are rejected here.
Dataset ParseIdx(std::span<const uint8_t> bytes, std::string id = "idx");

// Labels from a 1-D IDX stream (magic 0x00000801).
std::vector<uint8_t> ParseIdxLabels(std::span<const uint8_t> bytes);

std::vector<uint8_t> SerializeIdx(const Dataset& dataset);

Dataset ReadIdxFile(const std::filesystem::path& path);
void WriteIdxFile(const Dataset& dataset, const std::filesystem::path& path);

// Loads every .png/.pgm/.ppm file in `dir` (sorted by filename), resized by
// nearest neighbour to `target`. Channel count is converted only between
// gray and RGB by replication/first channel; no colour-space conversion.
Dataset LoadImageDirectory(const std::filesystem::path& dir, Shape target);

ImageTensor ResizeNearest(const ImageTensor& image, int height, int width);

// --- synthetic data ----------------------------------------------------------

enum class SyntheticKind { kNoise, kConstant, kColorSeq, kOrientedGradient, kSpriteGrid };
enum class Orientation { kVertical, kHorizontal };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kNoise;
  int seq_len = 2;  // colorseq only
  Orientation orientation = Orientation::kVertical;
  int count = 1;
  uint64_t seed = 0;
  Shape shape{32, 32, 1};
  // constant only: image i is the gray/colour level i (mod 256) on every
  // channel instead of a random colour.
  bool enumerate = false;
};

Dataset GenerateSynthetic(const SyntheticSpec& spec);

// Parses "kind=noise,count=100,seed=1,shape=32x32x1[,k=..][,orientation=..][,enumerate=1]".
SyntheticSpec ParseSyntheticSpec(const std::string& text);
std::string ToString(const SyntheticSpec& spec);

}  // namespace pixood

#endif  // PIXOOD_IMAGE_HPP_
