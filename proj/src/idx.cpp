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

#include <string>

#include "io_util.hpp"
#include "pixood/error.hpp"
#include "pixood/image.hpp"

namespace pixood {

namespace {

constexpr uint8_t kUnsignedByte = 0x08;

struct IdxHeader {
  std::vector<uint32_t> dims;
  size_t payload_offset = 0;
};

uint32_t ReadBigEndian32(std::span<const uint8_t> bytes, size_t offset) {
  return (uint32_t{bytes[offset]} << 24) | (uint32_t{bytes[offset + 1]} << 16) |
         (uint32_t{bytes[offset + 2]} << 8) | uint32_t{bytes[offset + 3]};
}

void AppendBigEndian32(std::vector<uint8_t>& out, uint32_t value) {
  out.push_back(static_cast<uint8_t>(value >> 24));
  out.push_back(static_cast<uint8_t>(value >> 16));
  out.push_back(static_cast<uint8_t>(value >> 8));
  out.push_back(static_cast<uint8_t>(value));
}

IdxHeader ParseHeader(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 || bytes[0] != 0 || bytes[1] != 0) {
    throw Error(ErrorKind::kFormat, "IDX magic must start with two zero bytes");
  }
  if (bytes[2] != kUnsignedByte) {
    throw Error(ErrorKind::kUnsupportedType,
                "IDX element type " + std::to_string(bytes[2]) + " unsupported (need 0x08)");
  }
  const int ndims = bytes[3];
  if (ndims == 0) throw Error(ErrorKind::kFormat, "IDX stream declares zero dimensions");
  IdxHeader header;
  header.payload_offset = 4 + 4 * static_cast<size_t>(ndims);
  if (bytes.size() < header.payload_offset) {
    throw Error(ErrorKind::kLength, "IDX header truncated");
  }
  for (int d = 0; d < ndims; ++d) header.dims.push_back(ReadBigEndian32(bytes, 4 + 4 * d));
  size_t payload = 1;
  for (uint32_t d : header.dims) payload *= d;
  if (bytes.size() - header.payload_offset < payload) {
    throw Error(ErrorKind::kLength, "IDX payload truncated: need " + std::to_string(payload) +
                                        " bytes, have " +
                                        std::to_string(bytes.size() - header.payload_offset));
  }
  return header;
}

}  // namespace

Dataset ParseIdx(std::span<const uint8_t> bytes, std::string id) {
  const IdxHeader header = ParseHeader(bytes);
  if (header.dims.size() != 3 && header.dims.size() != 4) {
    throw Error(ErrorKind::kFormat, "IDX image stream needs 3 or 4 dimensions, got " +
                                        std::to_string(header.dims.size()));
  }
  const Shape shape{static_cast<int>(header.dims[1]), static_cast<int>(header.dims[2]),
                    header.dims.size() == 4 ? static_cast<int>(header.dims[3]) : 1};
  const size_t count = header.dims[0];
  std::vector<ImageTensor> images;
  images.reserve(count);
  auto cursor = bytes.begin() + static_cast<std::ptrdiff_t>(header.payload_offset);
  for (size_t i = 0; i < count; ++i) {
    images.emplace_back(shape, std::vector<uint8_t>(cursor, cursor + static_cast<std::ptrdiff_t>(shape.size())));
    cursor += static_cast<std::ptrdiff_t>(shape.size());
  }
  return Dataset(std::move(id), std::move(images));
}

std::vector<uint8_t> ParseIdxLabels(std::span<const uint8_t> bytes) {
  const IdxHeader header = ParseHeader(bytes);
  if (header.dims.size() != 1) throw Error(ErrorKind::kFormat, "IDX label stream must be 1-D");
  const auto begin = bytes.begin() + static_cast<std::ptrdiff_t>(header.payload_offset);
  return std::vector<uint8_t>(begin, begin + header.dims[0]);
}

std::vector<uint8_t> SerializeIdx(const Dataset& dataset) {
  const Shape& shape = dataset.shape();
  const bool gray = shape.channels == 1;
  std::vector<uint8_t> out = {0, 0, kUnsignedByte, static_cast<uint8_t>(gray ? 3 : 4)};
  AppendBigEndian32(out, static_cast<uint32_t>(dataset.size()));
  AppendBigEndian32(out, static_cast<uint32_t>(shape.height));
  AppendBigEndian32(out, static_cast<uint32_t>(shape.width));
  if (!gray) AppendBigEndian32(out, static_cast<uint32_t>(shape.channels));
  out.reserve(out.size() + dataset.size() * shape.size());
  for (const auto& image : dataset.images()) {
    out.insert(out.end(), image.data().begin(), image.data().end());
  }
  return out;
}

Dataset ReadIdxFile(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return ParseIdx(bytes, path.stem().string());
}

void WriteIdxFile(const Dataset& dataset, const std::filesystem::path& path) {
  const auto bytes = SerializeIdx(dataset);
  WriteFileBytes(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace pixood
