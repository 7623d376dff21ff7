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

#ifndef PIXOOD_COMPLEXITY_HPP_
#define PIXOOD_COMPLEXITY_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pixood/image.hpp"

namespace pixood {

// Compressed-length complexity estimates L(x) for the Input Complexity
// baseline. Lengths include container overhead, which is a constant offset
// per image shape and so never changes a ranking.

enum class Codec { kPng, kDeflateRaw };

const char* CodecName(Codec codec);
Codec ParseCodec(const std::string& name);

// zlib level used by both codecs.
inline constexpr int kCompressionLevel = 9;

struct ComplexityEstimate {
  Codec codec = Codec::kPng;
  double bits = 0.0;            // 8 x encoded byte length
  double normalized_bpd = 0.0;  // bits / (H * W * C)
};

// Lossless PNG (8-bit gray or RGB, libpng default adaptive filtering).
std::vector<uint8_t> EncodePng(const ImageTensor& image);
ImageTensor DecodePng(std::span<const uint8_t> bytes);

// Raw deflate stream (no zlib wrapper) of the subpixel buffer.
std::vector<uint8_t> DeflateRaw(std::span<const uint8_t> bytes);

ComplexityEstimate CompressedLengthBits(const ImageTensor& image, Codec codec);

// Minimum over `codecs`; ties resolve to the codec listed first in Codec.
ComplexityEstimate BestLength(const ImageTensor& image, const std::set<Codec>& codecs);

}  // namespace pixood

#endif  // PIXOOD_COMPLEXITY_HPP_
