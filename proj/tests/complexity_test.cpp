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

#include "pixood/complexity.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <zlib.h>

#include "pixood/error.hpp"

namespace pixood {
namespace {

Dataset Synthetic(SyntheticKind kind, int count, Shape shape, int k = 2, bool enumerate = false) {
  SyntheticSpec spec;
  spec.kind = kind;
  spec.count = count;
  spec.shape = shape;
  spec.seq_len = k;
  spec.enumerate = enumerate;
  spec.seed = 11;
  return GenerateSynthetic(spec);
}

TEST(ComplexityTest, PngRoundTrip) {
  for (int c : {1, 3}) {
    const ImageTensor img = Synthetic(SyntheticKind::kNoise, 1, {7, 9, c})[0];
    EXPECT_EQ(DecodePng(EncodePng(img)), img);
  }
  const std::vector<uint8_t> junk = {1, 2, 3};
  EXPECT_THROW(DecodePng(junk), Error);
}

TEST(ComplexityTest, RawDeflateInflatesBack) {
  const ImageTensor img = Synthetic(SyntheticKind::kOrientedGradient, 1, {32, 32, 1})[0];
  const auto packed = DeflateRaw(img.data());
  std::vector<uint8_t> out(img.data().size());
  z_stream zs{};
  ASSERT_EQ(inflateInit2(&zs, -15), Z_OK);
  zs.next_in = const_cast<Bytef*>(packed.data());
  zs.avail_in = static_cast<uInt>(packed.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  EXPECT_EQ(inflate(&zs, Z_FINISH), Z_STREAM_END);
  inflateEnd(&zs);
  EXPECT_TRUE(std::equal(out.begin(), out.end(), img.data().begin()));
}

TEST(ComplexityTest, BitsAreEightTimesBytes) {
  const ImageTensor img = Synthetic(SyntheticKind::kNoise, 1, {8, 8, 3})[0];
  const auto png = CompressedLengthBits(img, Codec::kPng);
  EXPECT_EQ(png.bits, 8.0 * static_cast<double>(EncodePng(img).size()));
  EXPECT_EQ(png.normalized_bpd, png.bits / 192.0);
  EXPECT_EQ(CompressedLengthBits(img, Codec::kDeflateRaw).bits,
            8.0 * static_cast<double>(DeflateRaw(img.data()).size()));
}

TEST(ComplexityTest, NoiseCostsMoreThanConstant) {
  const ImageTensor noise = Synthetic(SyntheticKind::kNoise, 1, {32, 32, 1})[0];
  const ImageTensor flat = Synthetic(SyntheticKind::kConstant, 1, {32, 32, 1})[0];
  for (Codec codec : {Codec::kPng, Codec::kDeflateRaw}) {
    EXPECT_GT(CompressedLengthBits(noise, codec).bits, CompressedLengthBits(flat, codec).bits);
    EXPECT_EQ(CompressedLengthBits(noise, codec).bits, CompressedLengthBits(noise, codec).bits);
  }
}

TEST(ComplexityTest, ConstantImagesCompressAlmostAlike) {
  const Dataset constants = Synthetic(SyntheticKind::kConstant, 256, {32, 32, 1}, 2, true);
  std::vector<double> bits;
  for (const auto& img : constants.images()) bits.push_back(CompressedLengthBits(img, Codec::kPng).bits);
  const auto [lo, hi] = std::minmax_element(bits.begin(), bits.end());
  // Measured with libpng at level 9 and adaptive filtering: every level
  // encodes to 81 bytes except level 0, which is 6 bytes shorter.
  EXPECT_EQ(*lo, 600.0);
  EXPECT_EQ(*hi, 648.0);
  EXPECT_EQ(bits[0], 600.0);
  EXPECT_EQ(std::count(bits.begin(), bits.end(), 648.0), 255);
}

TEST(ComplexityTest, TilingBoundsOverhead) {
  for (SyntheticKind kind : {SyntheticKind::kNoise, SyntheticKind::kConstant, SyntheticKind::kOrientedGradient}) {
    const ImageTensor img = Synthetic(kind, 1, {16, 16, 1})[0];
    ImageTensor tiled(Shape{32, 32, 1});
    for (int r = 0; r < 32; ++r)
      for (int c = 0; c < 32; ++c) tiled.at(r, c, 0) = img.at(r % 16, c % 16, 0);
    for (Codec codec : {Codec::kPng, Codec::kDeflateRaw}) {
      EXPECT_LE(CompressedLengthBits(tiled, codec).bits, 4.1 * CompressedLengthBits(img, codec).bits);
    }
  }
}

TEST(BestLengthTest, MinimumOverCodecs) {
  const std::vector<SyntheticKind> kinds = {SyntheticKind::kNoise, SyntheticKind::kConstant,
                                            SyntheticKind::kColorSeq, SyntheticKind::kOrientedGradient,
                                            SyntheticKind::kSpriteGrid};
  for (SyntheticKind kind : kinds) {
    const Dataset generated = Synthetic(kind, 3, {32, 32, 1});
    for (const auto& img : generated.images()) {
      const auto png = CompressedLengthBits(img, Codec::kPng);
      const auto raw = CompressedLengthBits(img, Codec::kDeflateRaw);
      const auto best = BestLength(img, {Codec::kPng, Codec::kDeflateRaw});
      EXPECT_EQ(best.bits, std::min(png.bits, raw.bits));
      EXPECT_LE(best.bits, png.bits);
      EXPECT_EQ(BestLength(img, {Codec::kPng}).bits, png.bits);
    }
  }
  EXPECT_THROW(BestLength(Synthetic(SyntheticKind::kNoise, 1, {4, 4, 1})[0], {}), Error);
}

TEST(CodecTest, NamesRoundTrip) {
  for (Codec codec : {Codec::kPng, Codec::kDeflateRaw}) EXPECT_EQ(ParseCodec(CodecName(codec)), codec);
  EXPECT_THROW(ParseCodec("flif"), Error);
}

}  // namespace
}  // namespace pixood
