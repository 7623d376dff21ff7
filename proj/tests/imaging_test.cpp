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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <set>
#include <vector>

#include "pixood/error.hpp"
#include "pixood/image.hpp"

namespace pixood {
namespace {

std::vector<uint8_t> IdxHeader(std::vector<uint32_t> dims) {
  std::vector<uint8_t> out = {0, 0, 0x08, static_cast<uint8_t>(dims.size())};
  for (uint32_t d : dims) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<uint8_t>(d >> shift));
  }
  return out;
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIo;
}

TEST(IdxTest, MinimalStream) {
  auto bytes = IdxHeader({1, 2, 2});
  bytes.insert(bytes.end(), {0, 1, 2, 3});
  const Dataset ds = ParseIdx(bytes);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.shape(), (Shape{2, 2, 1}));
  EXPECT_EQ(std::vector<uint8_t>(ds[0].data().begin(), ds[0].data().end()),
            (std::vector<uint8_t>{0, 1, 2, 3}));
}

TEST(IdxTest, TruncatedPayloadIsLengthError) {
  auto bytes = IdxHeader({2, 2, 2});
  bytes.insert(bytes.end(), {0, 1, 2, 3});
  EXPECT_EQ(KindOf([&] { ParseIdx(bytes); }), ErrorKind::kLength);
}

TEST(IdxTest, BadMagicAndType) {
  std::vector<uint8_t> bad_magic = {1, 0, 0x08, 3};
  EXPECT_EQ(KindOf([&] { ParseIdx(bad_magic); }), ErrorKind::kFormat);
  auto float_type = IdxHeader({1, 1, 1});
  float_type[2] = 0x0D;
  float_type.push_back(0);
  EXPECT_EQ(KindOf([&] { ParseIdx(float_type); }), ErrorKind::kUnsupportedType);
}

TEST(IdxTest, MnistSizedStream) {
  auto bytes = IdxHeader({60000, 28, 28});
  ASSERT_EQ(bytes.size(), 16u);
  bytes.resize(16 + 60000u * 784u, 7);
  EXPECT_EQ(bytes.size(), 47040016u);
  const Dataset ds = ParseIdx(bytes);
  EXPECT_EQ(ds.size(), 60000u);
  EXPECT_EQ(ds.shape(), (Shape{28, 28, 1}));
}

TEST(IdxTest, ColorRoundTripAndLabels) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kNoise;
  spec.count = 3;
  spec.shape = {4, 5, 3};
  const Dataset ds = GenerateSynthetic(spec);
  const Dataset back = ParseIdx(SerializeIdx(ds));
  ASSERT_EQ(back.size(), 3u);
  for (size_t i = 0; i < 3; ++i) EXPECT_EQ(back[i], ds[i]);

  auto labels = IdxHeader({3});
  labels[3] = 1;
  labels.insert(labels.end(), {4, 1, 9});
  EXPECT_EQ(ParseIdxLabels(labels), (std::vector<uint8_t>{4, 1, 9}));
}

TEST(IdxTest, FileRoundTrip) {
  SyntheticSpec spec;
  spec.count = 2;
  spec.shape = {3, 3, 1};
  const Dataset ds = GenerateSynthetic(spec);
  const auto path = std::filesystem::temp_directory_path() / "pixood_idx_roundtrip.idx";
  WriteIdxFile(ds, path);
  const Dataset back = ReadIdxFile(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back[1], ds[1]);
}

TEST(ImageTensorTest, RejectsBadShapes) {
  EXPECT_EQ(KindOf([] { ImageTensor(Shape{2, 2, 2}); }), ErrorKind::kShape);
  EXPECT_EQ(KindOf([] { ImageTensor(Shape{2, 2, 1}, std::vector<uint8_t>(3)); }), ErrorKind::kLength);
}

TEST(SyntheticTest, ConstantColorImagesAreUniformPerChannel) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kConstant;
  spec.count = 4;
  spec.shape = {8, 8, 3};
  const Dataset generated = GenerateSynthetic(spec);
  for (const auto& img : generated.images()) {
    for (int ch = 0; ch < 3; ++ch) {
      for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) ASSERT_EQ(img.at(r, c, ch), img.at(0, 0, ch));
      }
    }
  }
}

TEST(SyntheticTest, EnumeratedConstantsCoverEveryLevel) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kConstant;
  spec.count = 256;
  spec.enumerate = true;
  const Dataset ds = GenerateSynthetic(spec);
  for (int i = 0; i < 256; ++i) EXPECT_EQ(ds[i].at(5, 7, 0), i);
}

TEST(SyntheticTest, ColorSeqTwoAlternatesInRasterOrder) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kColorSeq;
  spec.seq_len = 2;
  spec.shape = {4, 5, 3};
  const ImageTensor img = GenerateSynthetic(spec)[0];
  const size_t n = img.shape().pixels();
  for (size_t p = 0; p < n; ++p) {
    for (int ch = 0; ch < 3; ++ch) {
      EXPECT_EQ(img.data()[p * 3 + ch], img.data()[(p % 2) * 3 + ch]);
    }
  }
  EXPECT_NE(std::vector<uint8_t>(img.data().begin(), img.data().begin() + 3),
            std::vector<uint8_t>(img.data().begin() + 3, img.data().begin() + 6));
}

TEST(SyntheticTest, NoiseIsDeterministic) {
  SyntheticSpec spec;
  spec.count = 5;
  spec.seed = 99;
  const Dataset a = GenerateSynthetic(spec);
  const Dataset b = GenerateSynthetic(spec);
  for (size_t i = 0; i < 5; ++i) EXPECT_EQ(a[i], b[i]);
  spec.seed = 100;
  EXPECT_NE(GenerateSynthetic(spec)[0], a[0]);
}

TEST(SyntheticTest, OrientedGradientRampAndJitter) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kOrientedGradient;
  spec.count = 20;
  const Dataset generated = GenerateSynthetic(spec);
  for (const auto& img : generated.images()) {
    for (int r = 0; r < 32; ++r) {
      const long ramp = std::lround(32.0 + 192.0 * r / 31.0);
      for (int c = 0; c < 32; ++c) {
        ASSERT_LE(std::abs(img.at(r, c, 0) - ramp), 16);
      }
    }
  }
  spec.orientation = Orientation::kHorizontal;
  const ImageTensor h = GenerateSynthetic(spec)[0];
  EXPECT_LE(std::abs(h.at(9, 0, 0) - 32), 16);
  EXPECT_LE(std::abs(h.at(9, 31, 0) - 224), 16);
}

TEST(SyntheticTest, SpriteSitsInTopHalf) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kSpriteGrid;
  spec.count = 30;
  const Dataset generated = GenerateSynthetic(spec);
  for (const auto& img : generated.images()) {
    int bright = 0;
    for (int r = 16; r < 32; ++r) {
      for (int c = 0; c < 32; ++c) bright += img.at(r, c, 0) > 128;
    }
    EXPECT_EQ(bright, 0);
    int top = 0;
    for (int r = 0; r < 16; ++r) {
      for (int c = 0; c < 32; ++c) top += img.at(r, c, 0) > 128;
    }
    EXPECT_EQ(top, 9);
  }
}

TEST(SyntheticTest, SpecRoundTrip) {
  const SyntheticSpec spec = ParseSyntheticSpec("kind=colorseq,k=10,count=7,seed=3,shape=16x16x3");
  EXPECT_EQ(spec.kind, SyntheticKind::kColorSeq);
  EXPECT_EQ(spec.seq_len, 10);
  EXPECT_EQ(spec.count, 7);
  EXPECT_EQ(spec.shape, (Shape{16, 16, 3}));
  EXPECT_EQ(ToString(ParseSyntheticSpec(ToString(spec))), ToString(spec));
  EXPECT_EQ(KindOf([] { ParseSyntheticSpec("kind=plaid"); }), ErrorKind::kConfig);
}

TEST(SplitTest, NinetyTen) {
  SyntheticSpec spec;
  spec.count = 100;
  spec.shape = {2, 2, 1};
  const Dataset ds = GenerateSynthetic(spec);
  const auto [train, val] = SplitDataset(ds, 0.1, 5);
  EXPECT_EQ(train.size(), 90u);
  EXPECT_EQ(val.size(), 10u);
  EXPECT_EQ(train.split(), Split::kTrain);
  EXPECT_EQ(val.split(), Split::kVal);
  const auto [train2, val2] = SplitDataset(ds, 0.1, 5);
  for (size_t i = 0; i < 10; ++i) EXPECT_EQ(val[i], val2[i]);
}

TEST(SplitTest, EmptySideIsConfigError) {
  SyntheticSpec spec;
  spec.shape = {2, 2, 1};
  const Dataset ds = GenerateSynthetic(spec);
  EXPECT_EQ(KindOf([&] { SplitDataset(ds, 0.5, 0); }), ErrorKind::kConfig);
}

TEST(ResizeTest, NearestNeighbourUpsample) {
  const ImageTensor img(Shape{2, 2, 1}, {1, 2, 3, 4});
  const ImageTensor up = ResizeNearest(img, 4, 4);
  EXPECT_EQ(up.at(0, 0, 0), 1);
  EXPECT_EQ(up.at(1, 3, 0), 2);
  EXPECT_EQ(up.at(3, 0, 0), 3);
  EXPECT_EQ(up.at(3, 3, 0), 4);
}

}  // namespace
}  // namespace pixood
